//! Compiles and runs a small C program against the generated header and the
//! static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "kcontact.h"

int main(void) {
    KcExample *ex = NULL;
    if (kc_example_load("telegrapher", &ex) != KC_STATUS_OK) return 10;
    size_t n = 0, k = 0;
    kc_example_chart(ex, &n, &k);
    if (n != 1 || k != 2) return 11;
    KcReport *r = NULL;
    if (kc_check_hj(ex, "ansatz-linear", KC_MODE_STANDARD, 1, &r) != KC_STATUS_OK) return 12;
    if (!kc_report_passed(r) || strstr(kc_report_json(r), "\"PASS\"") == NULL) return 13;
    kc_report_free(r);
    if (kc_example_set_param(ex, "nope", 1.0) != KC_STATUS_CONFIG) return 14;
    char buf[256];
    size_t len = kc_last_error_message(buf, sizeof buf);
    if (len == 0 || len >= sizeof buf) return 15;
    kc_example_free(ex);
    printf("ok %s\n", kc_version());
    return 0;
}
"#;

/// Build the static library for the running profile; integration tests only
/// get the rlib. Returns target/<profile>/libkcontact_ffi.a.
fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let mut cmd = Command::new(cargo);
    cmd.args(["build", "--quiet", "-p", "kcontact-ffi", "--lib"])
        .arg("--manifest-path")
        .arg(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("Cargo.toml"))
        .arg("--target-dir")
        .arg(profile_dir.parent().unwrap());
    if profile_dir.ends_with("release") {
        cmd.arg("--release");
    }
    assert!(
        cmd.status().expect("cargo runs").success(),
        "static library build failed"
    );
    profile_dir.join("libkcontact_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let lib = static_lib();
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let st = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("C compiler available");
    assert!(st.success(), "C build failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
