use std::path::Path;
use std::process::{Command, Output};

fn kcontact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcontact"))
        .args(args)
        .env("KCONTACT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn list_shows_every_example() {
    let o = kcontact(&["list"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for key in kcontact::corpus::EXAMPLES {
        assert!(s.contains(key), "{key} missing from\n{s}");
    }
    let o = kcontact(&["list", "--example", "telegrapher"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("parameters"));
}

#[test]
fn unknown_names_and_bad_flags_exit_2() {
    assert_eq!(code(&kcontact(&["list", "--example", "nope"])), 2);
    assert_eq!(code(&kcontact(&["check-hj", "--example", "nope"])), 2);
    assert_eq!(
        code(&kcontact(&[
            "check-hj",
            "--example",
            "telegrapher",
            "--set",
            "section=nope"
        ])),
        2
    );
    assert_eq!(
        code(&kcontact(&[
            "check-hj",
            "--example",
            "telegrapher",
            "--mode",
            "sideways"
        ])),
        2
    );
    assert_eq!(
        code(&kcontact(&[
            "check-hj",
            "--example",
            "telegrapher",
            "--set",
            "bogus=1"
        ])),
        2
    );
    assert_eq!(code(&kcontact(&["frobnicate"])), 2);
    assert_eq!(code(&kcontact(&["gauge", "--set", "n=1"])), 2);
}

#[test]
fn check_hj_pass_and_fail() {
    let base = [
        "check-hj",
        "--example",
        "telegrapher",
        "--set",
        "section=ansatz-linear",
    ];
    let o = kcontact(&base);
    assert_eq!(code(&o), 0);
    let j = json(&o);
    assert_eq!(j["verdict"], "PASS");
    assert!(j["sup_residual"].as_f64().unwrap() <= 1e-10);

    let mut wrong = base.to_vec();
    wrong.extend(["--set", "a=0.6666666666666666"]);
    let o = kcontact(&wrong);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "FAIL");
}

#[test]
fn check_hj_contract_failure_exits_3() {
    let o = kcontact(&[
        "check-hj",
        "--example",
        "telegrapher",
        "--set",
        "section=zdep-constant",
    ]);
    assert_eq!(code(&o), 3);
    let j = json(&o);
    assert_eq!(j["verdict"], "FAIL");
    assert!(j["error"]["message"].is_string());
}

#[test]
fn family_check_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kcontact(&[
        "check-hj",
        "--example",
        "hunter-saxton",
        "--set",
        "section=zdep-family",
        "--mode",
        "evolution",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("check_hj.json")).unwrap()).unwrap();
    assert_eq!(j["family"]["rows"].as_array().unwrap().len(), 25);
    assert!(j["family"]["roundtrip"].as_f64().unwrap() <= 1e-12);
}

fn read_csv(p: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(p).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| {
            rec.unwrap()
                .iter()
                .map(|v| v.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn simulate_writes_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kcontact(&[
        "simulate",
        "--example",
        "telegrapher",
        "--set",
        "section=ansatz-linear",
        "--set",
        "solution=exponential",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["verdict"], "PASS");
    assert!(summary["closed_form_error"].as_f64().unwrap() <= 1e-8);
    let (header, rows) = read_csv(&dir.path().join("psi.csv"));
    assert_eq!(
        header,
        ["t1", "t2", "q1", "p1_1", "p2_1", "z1", "z2", "r_q", "r_p", "r_z"]
    );
    assert_eq!(rows.len(), 2500);
    let a = -2.0 / 3.0;
    for r in &rows {
        assert!((r[2] - (a * (2.0 * r[0] - r[1])).exp()).abs() <= 1e-8);
        assert!(r[7].max(r[8]).max(r[9]) <= 1e-6);
    }
}

#[test]
fn simulate_without_solution_is_config_error() {
    let o = kcontact(&["simulate", "--example", "telegrapher"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "example = \"hunter-saxton\"\nmode = \"evolution\"\n[solution]\nkey = \"quadratic\"\n[check]\nmap_tol = 1e-10\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = kcontact(&["simulate", "--config", c]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["mode"], "evolution");
    std::fs::write(&cfg, "example = \"hunter-saxton\"\nunknown_key = 1\n").unwrap();
    assert_eq!(code(&kcontact(&["simulate", "--config", c])), 2);
    assert_eq!(
        code(&kcontact(&[
            "simulate",
            "--config",
            "/nonexistent/run.toml"
        ])),
        2
    );
}

#[test]
fn gauge_command_matches_formula() {
    for (n, k, want) in [(1, 2, 6), (2, 1, 0), (3, 2, 12), (1, 3, 16)] {
        let o = kcontact(&[
            "gauge",
            "--set",
            &format!("n={n}"),
            "--set",
            &format!("k={k}"),
        ]);
        assert_eq!(code(&o), 0);
        assert!(
            stdout(&o).contains(&format!("analytic {want} / numeric {want} PASS")),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn runs_are_deterministic_for_a_seed() {
    let args = [
        "check-hj",
        "--example",
        "membrane",
        "--set",
        "section=plane-wave",
        "--seed",
        "42",
    ];
    let (a, b) = (kcontact(&args), kcontact(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = kcontact(&[
        "check-hj",
        "--example",
        "membrane",
        "--set",
        "section=plane-wave",
        "--seed",
        "43",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn in_process_entry_point_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let c = kcontact::cli::run_with(
        ["kcontact", "gauge", "--set", "n=1", "--set", "k=2"],
        &mut out,
        &mut err,
    );
    assert_eq!(c, 0);
    assert_eq!(
        out,
        kcontact(&["gauge", "--set", "n=1", "--set", "k=2"]).stdout
    );
}
