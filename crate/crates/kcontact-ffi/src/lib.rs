//! C ABI over the kcontact library.
//!
//! Handles are opaque and owned by the caller, who must release them with the
//! matching `_free` function. Every fallible call returns a [`KcStatus`]; the
//! message of the most recent failure on the calling thread is available from
//! [`kc_last_error_message`]. Numeric outputs use the flat phase-space layout
//! `[q^1..q^n, p_1^1..p_n^1, .., p_1^k..p_n^k, z^1..z^k]`.

use kcontact::cli::{check_hj, gauge_check, simulate, RunConfig};
use kcontact::corpus::{self, ExampleSystem, Params, Verdict};
use kcontact::geometry::DarbouxPoint;
use kcontact::hdw::{canonical_at, Mode};
use kcontact::{Error, Result};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes; 0 to 5 coincide with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KcStatus {
    Ok = 0,
    /// The check ran and its verdict is FAIL.
    Fail = 1,
    Config = 2,
    Contract = 3,
    Divergence = 4,
    Integrability = 5,
    NullPointer = 10,
    InvalidUtf8 = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

/// Check mode.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KcMode {
    Standard = 0,
    Evolution = 1,
}

impl From<KcMode> for Mode {
    fn from(m: KcMode) -> Mode {
        match m {
            KcMode::Standard => Mode::Standard,
            KcMode::Evolution => Mode::Evolution,
        }
    }
}

/// A corpus example with its current parameter overrides.
pub struct KcExample {
    system: ExampleSystem,
    overrides: Params,
}

/// A finished check or simulation: verdict, exit code and JSON report.
pub struct KcReport {
    exit_code: i32,
    verdict: Verdict,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KcStatus {
    match e.exit_code() {
        2 => KcStatus::Config,
        4 => KcStatus::Divergence,
        5 => KcStatus::Integrability,
        _ => KcStatus::Contract,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> std::result::Result<KcStatus, KcStatus>>(f: F) -> KcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            KcStatus::Panic
        }
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, KcStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> std::result::Result<&'a str, KcStatus> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(KcStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        KcStatus::InvalidUtf8
    })
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> std::result::Result<&'a T, KcStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(&format!("{what} is null"));
        KcStatus::NullPointer
    })
}

fn nonnull<T>(p: *const T, what: &str) -> std::result::Result<(), KcStatus> {
    if p.is_null() {
        set_error(&format!("{what} is null"));
        return Err(KcStatus::NullPointer);
    }
    Ok(())
}

/// Length in bytes (without the terminator) of the last error message; copies
/// it into `buf` when `buf` holds at least that many bytes plus one.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn kc_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes_with_nul();
        if !buf.is_null() && len >= bytes.len() {
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        }
        bytes.len() - 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Load example `name` into `*out`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_example_load(
    name: *const c_char,
    out: *mut *mut KcExample,
) -> KcStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        nonnull(out, "out")?;
        let system = lib(corpus::load(name))?;
        *out = Box::into_raw(Box::new(KcExample {
            system,
            overrides: Params::new(),
        }));
        Ok(KcStatus::Ok)
    })
}

/// Release an example handle; null is ignored.
///
/// # Safety
/// `ex` must come from [`kc_example_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kc_example_free(ex: *mut KcExample) {
    if !ex.is_null() {
        drop(Box::from_raw(ex));
    }
}

/// Chart sizes of the example.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kc_example_chart(
    ex: *const KcExample,
    n: *mut usize,
    k: *mut usize,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        nonnull(n, "n")?;
        nonnull(k, "k")?;
        *n = ex.system.chart.n;
        *k = ex.system.chart.k;
        Ok(KcStatus::Ok)
    })
}

/// Override a parameter; unknown names are rejected with `Config`.
///
/// # Safety
/// `ex` must be a valid handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kc_example_set_param(
    ex: *mut KcExample,
    name: *const c_char,
    value: f64,
) -> KcStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let ex = ex.as_mut().ok_or_else(|| {
            set_error("example is null");
            KcStatus::NullPointer
        })?;
        let mut next = ex.overrides.clone();
        next.insert(name.to_string(), value);
        lib(ex.system.merge(&next))?;
        ex.overrides = next;
        Ok(KcStatus::Ok)
    })
}

/// Current value of a parameter.
///
/// # Safety
/// `ex` must be a valid handle, `name` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn kc_example_get_param(
    ex: *const KcExample,
    name: *const c_char,
    out: *mut f64,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        let name = str_arg(name, "name")?;
        nonnull(out, "out")?;
        let p = lib(ex.system.merge(&ex.overrides))?;
        match p.get(name) {
            Some(v) => {
                *out = *v;
                Ok(KcStatus::Ok)
            }
            None => {
                set_error(&format!("unknown parameter {name}"));
                Err(KcStatus::Config)
            }
        }
    })
}

unsafe fn point(
    ex: &KcExample,
    x: *const f64,
    len: usize,
) -> std::result::Result<DarbouxPoint, KcStatus> {
    nonnull(x, "x")?;
    let xs = std::slice::from_raw_parts(x, len);
    lib(DarbouxPoint::from_flat(ex.system.chart, xs))
}

/// Hamiltonian value at the flat point `x` of length `len`.
///
/// # Safety
/// `x` must point to `len` doubles and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn kc_hamiltonian_value(
    ex: *const KcExample,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        nonnull(out, "out")?;
        let pt = point(ex, x, len)?;
        let h = lib(ex.system.hamiltonian(&lib(ex.system.merge(&ex.overrides))?))?;
        *out = lib(h.value(&pt))?;
        Ok(KcStatus::Ok)
    })
}

/// Gradient of the Hamiltonian at `x`, written in flat layout to `out`
/// (`out_len` must be at least `len`).
///
/// # Safety
/// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn kc_hamiltonian_grad(
    ex: *const KcExample,
    x: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        let pt = point(ex, x, len)?;
        let h = lib(ex.system.hamiltonian(&lib(ex.system.merge(&ex.overrides))?))?;
        let g = lib(h.grad_flat(&pt.to_flat()))?;
        write_out(&g, out, out_len)
    })
}

/// Canonical k-vector field at `x`: k consecutive tangent vectors in flat layout,
/// `k * len` doubles in total.
///
/// # Safety
/// `x` must point to `len` doubles and `out` to `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn kc_canonical_field(
    ex: *const KcExample,
    mode: KcMode,
    x: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        let pt = point(ex, x, len)?;
        let h = lib(ex.system.hamiltonian(&lib(ex.system.merge(&ex.overrides))?))?;
        let kt = lib(canonical_at(&h, mode.into(), &pt))?;
        write_out(&kt.to_flat(), out, out_len)
    })
}

unsafe fn write_out(
    v: &[f64],
    out: *mut f64,
    out_len: usize,
) -> std::result::Result<KcStatus, KcStatus> {
    nonnull(out, "out")?;
    if out_len < v.len() {
        set_error(&format!(
            "output buffer holds {out_len} values, {} needed",
            v.len()
        ));
        return Err(KcStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
    Ok(KcStatus::Ok)
}

fn config(ex: &KcExample, mode: KcMode, seed: u64) -> RunConfig {
    RunConfig {
        example: Some(ex.system.key.to_string()),
        mode: Some(Mode::from(mode).to_string()),
        seed: Some(seed),
        params: ex.overrides.clone(),
        ..Default::default()
    }
}

fn finish(
    exit_code: i32,
    verdict: Verdict,
    json: String,
    out: *mut *mut KcReport,
) -> std::result::Result<KcStatus, KcStatus> {
    let json = CString::new(json).map_err(|_| KcStatus::Panic)?;
    // SAFETY: callers check `out` before running the check.
    unsafe {
        *out = Box::into_raw(Box::new(KcReport {
            exit_code,
            verdict,
            json,
        }));
    }
    Ok(if verdict == Verdict::Pass {
        KcStatus::Ok
    } else {
        KcStatus::Fail
    })
}

/// Hamilton-Jacobi check of `section`; a report is produced whenever the check
/// runs, including FAIL verdicts (status `Fail` or `Contract`).
///
/// # Safety
/// `ex` must be valid, `section` NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_check_hj(
    ex: *const KcExample,
    section: *const c_char,
    mode: KcMode,
    seed: u64,
    out: *mut *mut KcReport,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        let section = str_arg(section, "section")?;
        nonnull(out, "out")?;
        let mut cfg = config(ex, mode, seed);
        lib(cfg.set(&format!("section={section}")))?;
        let rep = lib(check_hj(&lib(cfg.resolve())?))?;
        let code = rep.exit_code();
        let json = lib(serde_json::to_string(&rep).map_err(|e| Error::Io(e.to_string())))?;
        let st = finish(code, rep.verdict, json, out)?;
        Ok(if code == 3 { KcStatus::Contract } else { st })
    })
}

/// Simulate reference `solution`, optionally through `section` (null for none).
///
/// # Safety
/// `ex` must be valid, strings NUL-terminated or null (`section` only), `out` valid.
#[no_mangle]
pub unsafe extern "C" fn kc_simulate(
    ex: *const KcExample,
    solution: *const c_char,
    section: *const c_char,
    mode: KcMode,
    seed: u64,
    out: *mut *mut KcReport,
) -> KcStatus {
    guard(|| {
        let ex = ref_arg(ex, "example")?;
        let solution = str_arg(solution, "solution")?;
        nonnull(out, "out")?;
        let mut cfg = config(ex, mode, seed);
        lib(cfg.set(&format!("solution={solution}")))?;
        if !section.is_null() {
            lib(cfg.set(&format!("section={}", str_arg(section, "section")?)))?;
        }
        let sim = lib(simulate(&lib(cfg.resolve())?))?;
        let code = sim.report.exit_code();
        let json = lib(serde_json::to_string(&sim.report).map_err(|e| Error::Io(e.to_string())))?;
        let st = finish(code, sim.report.verdict, json, out)?;
        Ok(match code {
            0 | 1 => st,
            4 => KcStatus::Divergence,
            5 => KcStatus::Integrability,
            _ => KcStatus::Contract,
        })
    })
}

/// Exit code the command line would return for this report.
///
/// # Safety
/// `r` must be a valid report handle.
#[no_mangle]
pub unsafe extern "C" fn kc_report_exit_code(r: *const KcReport) -> i32 {
    r.as_ref().map_or(-1, |r| r.exit_code)
}

/// 1 when the verdict is PASS, 0 otherwise.
///
/// # Safety
/// `r` must be a valid report handle.
#[no_mangle]
pub unsafe extern "C" fn kc_report_passed(r: *const KcReport) -> i32 {
    r.as_ref()
        .map_or(0, |r| (r.verdict == Verdict::Pass) as i32)
}

/// JSON text of the report, owned by the handle.
///
/// # Safety
/// `r` must be a valid report handle; the string dies with it.
#[no_mangle]
pub unsafe extern "C" fn kc_report_json(r: *const KcReport) -> *const c_char {
    r.as_ref().map_or(std::ptr::null(), |r| r.json.as_ptr())
}

/// Release a report; null is ignored.
///
/// # Safety
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kc_report_free(r: *mut KcReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Gauge-kernel dimension (n+1)(k^2-1) and the smallest and largest numeric
/// kernel dimensions over `points` random points.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kc_gauge_dimension(
    n: usize,
    k: usize,
    points: usize,
    seed: u64,
    analytic: *mut usize,
    numeric_min: *mut usize,
    numeric_max: *mut usize,
) -> KcStatus {
    guard(|| {
        nonnull(analytic, "analytic")?;
        nonnull(numeric_min, "numeric_min")?;
        nonnull(numeric_max, "numeric_max")?;
        let rep = lib(gauge_check(n, k, points, seed))?;
        *analytic = rep.analytic;
        *numeric_min = rep.numeric.iter().copied().min().unwrap_or(0);
        *numeric_max = rep.numeric.iter().copied().max().unwrap_or(0);
        Ok(if rep.verdict == Verdict::Pass {
            KcStatus::Ok
        } else {
            KcStatus::Fail
        })
    })
}
