use kcontact_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe {
        let n = kc_last_error_message(ptr::null_mut(), 0);
        let mut buf = vec![0 as std::ffi::c_char; n + 1];
        assert_eq!(kc_last_error_message(buf.as_mut_ptr(), buf.len()), n);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn load(name: &str) -> *mut KcExample {
    let mut ex = ptr::null_mut();
    assert_eq!(
        unsafe { kc_example_load(cstr(name).as_ptr(), &mut ex) },
        KcStatus::Ok
    );
    assert!(!ex.is_null());
    ex
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(kc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn unknown_example_sets_error() {
    let mut ex = ptr::null_mut();
    let st = unsafe { kc_example_load(cstr("nope").as_ptr(), &mut ex) };
    assert_eq!(st, KcStatus::Config);
    assert!(ex.is_null());
    assert!(last_error().contains("nope"));
    assert_eq!(
        unsafe { kc_example_load(ptr::null(), &mut ex) },
        KcStatus::NullPointer
    );
}

#[test]
fn parameters_and_hamiltonian() {
    let ex = load("telegrapher");
    unsafe {
        let (mut n, mut k) = (0, 0);
        assert_eq!(kc_example_chart(ex, &mut n, &mut k), KcStatus::Ok);
        assert_eq!((n, k), (1, 2));
        assert_eq!(
            kc_example_set_param(ex, cstr("bogus").as_ptr(), 1.0),
            KcStatus::Config
        );
        assert_eq!(
            kc_example_set_param(ex, cstr("epsilon").as_ptr(), 0.5),
            KcStatus::Ok
        );
        let mut v = 0.0;
        assert_eq!(
            kc_example_get_param(ex, cstr("epsilon").as_ptr(), &mut v),
            KcStatus::Ok
        );
        assert_eq!(v, 0.5);
        // h = (pt^2 - px^2)/2 + eps u^2/2 + lambda z^t
        let x = [2.0, 1.0, 3.0, 0.5, -1.0];
        assert_eq!(
            kc_hamiltonian_value(ex, x.as_ptr(), 5, &mut v),
            KcStatus::Ok
        );
        assert_eq!(v, 0.5 * (1.0 - 9.0) + 0.25 * 4.0 + 0.5);
        let mut g = [0.0; 5];
        assert_eq!(
            kc_hamiltonian_grad(ex, x.as_ptr(), 5, g.as_mut_ptr(), 5),
            KcStatus::Ok
        );
        assert_eq!(g, [1.0, 1.0, -3.0, 1.0, 0.0]);
        assert_eq!(
            kc_hamiltonian_grad(ex, x.as_ptr(), 5, g.as_mut_ptr(), 4),
            KcStatus::BufferTooSmall
        );
        assert_eq!(
            kc_hamiltonian_value(ex, x.as_ptr(), 4, &mut v),
            KcStatus::Contract
        );
        let mut f = [0.0; 10];
        assert_eq!(
            kc_canonical_field(ex, KcMode::Evolution, x.as_ptr(), 5, f.as_mut_ptr(), 10),
            KcStatus::Ok
        );
        assert_eq!((f[0], f[5]), (1.0, -3.0));
        kc_example_free(ex);
    }
}

#[test]
fn check_hj_reports() {
    let ex = load("telegrapher");
    unsafe {
        let mut r = ptr::null_mut();
        let st = kc_check_hj(
            ex,
            cstr("ansatz-linear").as_ptr(),
            KcMode::Standard,
            1,
            &mut r,
        );
        assert_eq!(st, KcStatus::Ok);
        assert_eq!((kc_report_exit_code(r), kc_report_passed(r)), (0, 1));
        let json: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(kc_report_json(r)).to_str().unwrap()).unwrap();
        assert_eq!(json["verdict"], "PASS");
        kc_report_free(r);

        assert_eq!(
            kc_example_set_param(ex, cstr("a").as_ptr(), 2.0 / 3.0),
            KcStatus::Ok
        );
        let st = kc_check_hj(
            ex,
            cstr("ansatz-linear").as_ptr(),
            KcMode::Standard,
            1,
            &mut r,
        );
        assert_eq!(st, KcStatus::Fail);
        assert_eq!((kc_report_exit_code(r), kc_report_passed(r)), (1, 0));
        kc_report_free(r);

        let st = kc_check_hj(
            ex,
            cstr("zdep-constant").as_ptr(),
            KcMode::Standard,
            1,
            &mut r,
        );
        assert_eq!(st, KcStatus::Contract);
        assert_eq!(kc_report_exit_code(r), 3);
        kc_report_free(r);
        kc_example_free(ex);
    }
}

#[test]
fn simulate_through_section() {
    let ex = load("hunter-saxton");
    unsafe {
        let mut r = ptr::null_mut();
        let st = kc_simulate(
            ex,
            cstr("linear").as_ptr(),
            cstr("linear-zind").as_ptr(),
            KcMode::Standard,
            3,
            &mut r,
        );
        assert_eq!(st, KcStatus::Ok, "{}", last_error());
        let json: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(kc_report_json(r)).to_str().unwrap()).unwrap();
        assert!(json["closed_form_error"].as_f64().unwrap() <= 1e-8);
        kc_report_free(r);
        let st = kc_simulate(
            ex,
            cstr("quadratic").as_ptr(),
            ptr::null(),
            KcMode::Evolution,
            3,
            &mut r,
        );
        assert_eq!(st, KcStatus::Ok, "{}", last_error());
        kc_report_free(r);
        kc_example_free(ex);
    }
}

#[test]
fn gauge_dimension_matches() {
    let (mut a, mut lo, mut hi) = (0, 0, 0);
    let st = unsafe { kc_gauge_dimension(2, 3, 20, 5, &mut a, &mut lo, &mut hi) };
    assert_eq!(st, KcStatus::Ok);
    assert_eq!((a, lo, hi), (24, 24, 24));
    assert_eq!(
        unsafe { kc_gauge_dimension(0, 3, 20, 5, &mut a, &mut lo, &mut hi) },
        KcStatus::Config
    );
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        kc_example_free(ptr::null_mut());
        kc_report_free(ptr::null_mut());
        assert_eq!(kc_report_exit_code(ptr::null()), -1);
        assert!(kc_report_json(ptr::null()).is_null());
        let mut v = 0.0;
        assert_eq!(
            kc_hamiltonian_value(ptr::null(), [0.0].as_ptr(), 1, &mut v),
            KcStatus::NullPointer
        );
    }
}
