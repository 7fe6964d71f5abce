//! End-to-end tests of the command-line front end: exit-code contract,
//! report determinism, and seed precedence.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ejalab"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, content).unwrap();
    p
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn spectrum_prints_eigenvalues_and_frame() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "x.json",
        r#"{"kind":"sym","matrix":[[5.0,0.0],[0.0,7.0]]}"#,
    );
    let out = bin().arg("spectrum").arg(&f).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    let lam: Vec<f64> = serde_json::from_value(v["lambda"].clone()).unwrap();
    assert_eq!(lam, vec![7.0, 5.0]);
    assert!(v["frame"].is_object() || v["frame"].is_array());
}

#[test]
fn commute_identical_elements_is_strong() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "a.json",
        r#"{"algebra":{"kind":"real_vec","n":3},"coords":[2.0,1.0,-1.0]}"#,
    );
    let out = bin().arg("commute").arg(&f).arg(&f).output().unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["strong"], true);
    assert_eq!(v["operator"], true);
    assert!(v["inner_gap"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn solve_linear_max_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(
        dir.path(),
        "set.json",
        r#"{"algebra":{"kind":"real_vec","n":2},"variant":"finite_orbits","lambdas":[[1.0,0.0]]}"#,
    );
    let obj = write(
        dir.path(),
        "obj.json",
        r#"{"h":"linear","c":{"algebra":{"kind":"real_vec","n":2},"coords":[3.0,-2.0]}}"#,
    );
    let out = bin()
        .args(["solve", "linear_max", "--set"])
        .arg(&set)
        .arg("--objective")
        .arg(&obj)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() < 1e-10);
    assert_eq!(v["mode"], "exact_reduction");
    assert_eq!(v["commutation"]["strong"], true);
}

#[test]
fn solve_unconverged_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let set = write(
        dir.path(),
        "set.json",
        r#"{"algebra":{"kind":"sym","n":2},"variant":"simplex","level":1.0}"#,
    );
    let obj = write(
        dir.path(),
        "obj.json",
        r#"{"h":"quadratic","center":{"kind":"sym","matrix":[[50.0,0.0],[0.0,-90.0]]},"weight":1.0}"#,
    );
    let opts = write(dir.path(), "opts.json", r#"{"max_iter":1}"#);
    let out = bin()
        .args(["solve", "convex_min", "--set"])
        .arg(&set)
        .arg("--objective")
        .arg(&obj)
        .arg("--options")
        .arg(&opts)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // The flagged report is still printed.
    let v = stdout_json(&out);
    assert_eq!(v["converged"], false);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"algebra":{"kind":"sym","n":2}"#);
    let out = bin().arg("spectrum").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Wrong coordinate count is a config error, too.
    let f = write(
        dir.path(),
        "short.json",
        r#"{"algebra":{"kind":"sym","n":2},"coords":[1.0]}"#,
    );
    let out = bin().arg("spectrum").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["check", "--suite", "not_a_check", "--trials", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_failures_exit_one_and_witnesses_replay() {
    let dir = tempfile::tempdir().unwrap();
    // Absurd tolerance manufactures failures out of benign roundoff.
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"algebras":[{"kind":"sym","n":2}],"trials":6,"seed":3,"tol":1e-300,"checks":["strong_criteria"]}"#,
    );
    let report_path = dir.path().join("report.json");
    let out = bin()
        .args(["check", "--config"])
        .arg(&cfg)
        .arg("--no-timestamp")
        .arg("--out")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let rec = &v["checks"][0];
    assert!(rec["failures"].as_u64().unwrap() > 0);
    assert_eq!(
        rec["failures"].as_u64().unwrap() as usize,
        rec["witnesses"].as_array().unwrap().len()
    );
}

#[test]
fn check_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for run in 0..2 {
        let p = dir.path().join(format!("r{run}.json"));
        let out = bin()
            .args(["check", "--suite", "ftvn,theorem2", "--trials", "25", "--seed", "7", "--no-timestamp"])
            .arg("--out")
            .arg(&p)
            .output()
            .unwrap();
        assert!(out.status.success());
        reports.push(fs::read(&p).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn seed_precedence_flag_env_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"trials":1,"seed":1,"checks":["example1"]}"#,
    );
    let run = |env_seed: Option<&str>, flag_seed: Option<&str>| -> u64 {
        let mut cmd = bin();
        cmd.args(["check", "--config"]).arg(&cfg).arg("--no-timestamp");
        if let Some(s) = flag_seed {
            cmd.args(["--seed", s]);
        }
        match env_seed {
            Some(s) => cmd.env("EJALAB_SEED", s),
            None => cmd.env_remove("EJALAB_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        stdout_json(&out)["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 1); // config
    assert_eq!(run(Some("2"), None), 2); // env beats config
    assert_eq!(run(Some("2"), Some("3")), 3); // flag beats env
}

#[test]
fn csv_summary_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("summary.csv");
    let out_json = dir.path().join("r.json");
    let out = bin()
        .args(["check", "--suite", "example1", "--no-timestamp"])
        .arg("--out")
        .arg(&out_json)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let content = fs::read_to_string(&csv).unwrap();
    assert!(content.starts_with("check,trials,failures"));
    assert!(content.contains("example1,1,0,0"));
}

#[test]
fn demo_example1_trace() {
    let out = bin().args(["demo", "example1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("operator: yes"));
    assert!(text.contains("strong: no"));
}
