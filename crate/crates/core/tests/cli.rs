//! Process-level tests of the `hid` binary: flag handling, exit codes,
//! report formats, and output determinism.

use std::process::{Command, Output};

use tempfile::tempdir;

fn hid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hid"))
        .args(args)
        .env_remove("HID_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn list_prints_the_registry_table() {
    let out = hid(&["list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 34); // header + 33 entries
    assert!(text.contains("C7"));
    assert!(text.contains("p ≥ q ≥ n, n ≥ 2"));
}

#[test]
fn eval_prints_exact_values_and_approximations() {
    let out = hid(&["eval", "--id", "T3", "--param", "n=1", "--param", "x=2", "--param", "y=1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lhs = -1/9"));
    assert!(text.contains("rhs = -1/9"));
    assert!(text.contains("verdict: equal"));

    // Every rational the CLI prints must re-parse to the same value.
    for line in text.lines().filter(|l| l.starts_with("lhs") || l.starts_with("rhs")) {
        let value = line.split_whitespace().nth(2).unwrap();
        let parsed: hid_core::Rational = value.parse().unwrap();
        assert_eq!(parsed, hid_core::Rational::ratio(-1, 9));
    }
}

#[test]
fn eval_handles_constraints_and_poles() {
    let out = hid(&["eval", "--id", "C1", "--param", "p=1", "--param", "q=2", "--param", "n=1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("constraint-violation"));

    let out = hid(&["eval", "--id", "T1", "--param", "n=0", "--param", "x=1", "--param", "y=1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: equal"));

    let out = hid(&["eval", "--id", "T3", "--param", "n=2", "--param", "x=2", "--param", "y=1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: pole"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hid(&["eval", "--id", "NOPE"]).status.code(), Some(2));
    assert_eq!(hid(&["verify", "--samples", "5"]).status.code(), Some(2));
    assert_eq!(hid(&["verify", "--all", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(hid(&["frobnicate"]).status.code(), Some(2));
    let out = hid(&["eval", "--id", "T1", "--param", "x=1", "--param", "y=2/0", "--param", "n=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_reports_zero_failures_and_exits_zero() {
    let out = hid(&["verify", "--id", "S0", "--samples", "30", "--seed", "42", "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["per_identity"][0]["id"], "S0");
    assert_eq!(report["per_identity"][0]["attempted"], 30);
    assert_eq!(report["per_identity"][0]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["global"]["seed"], 42);
}

#[test]
fn verify_csv_has_the_fixed_column_order() {
    let out = hid(&["verify", "--id", "T1", "--id", "T3", "--samples", "10", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "id,attempted,passed,failures,poles_skipped,constraint_skipped"
    );
    assert!(lines.next().unwrap().starts_with("T1,10,"));
    assert!(lines.next().unwrap().starts_with("T3,10,"));
}

#[test]
fn verify_out_file_matches_stdout_bytes() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = hid(&[
        "verify",
        "--id",
        "T4",
        "--samples",
        "20",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let from_file = std::fs::read(&path).unwrap();
    assert_eq!(from_file, out.stdout);
}

#[test]
fn verify_runs_are_deterministic_across_processes() {
    let args = ["verify", "--id", "P1", "--id", "T9", "--samples", "25", "--seed", "42", "--format", "json"];
    let a: serde_json::Value = serde_json::from_str(&stdout(&hid(&args))).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&hid(&args))).unwrap();
    let strip = |mut v: serde_json::Value| {
        v["global"].as_object_mut().unwrap().insert("wall_time_ms".into(), 0.into());
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn seed_env_var_overrides_default_but_not_flag() {
    let via_env = Command::new(env!("CARGO_BIN_EXE_hid"))
        .args(["verify", "--id", "S0", "--samples", "5", "--format", "json"])
        .env("HID_SEED", "123")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(&stdout(&via_env)).unwrap();
    assert_eq!(report["global"]["seed"], 123);

    let flag_wins = Command::new(env!("CARGO_BIN_EXE_hid"))
        .args(["verify", "--id", "S0", "--samples", "5", "--seed", "7", "--format", "json"])
        .env("HID_SEED", "123")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(&stdout(&flag_wins)).unwrap();
    assert_eq!(report["global"]["seed"], 7);
}

#[test]
fn grid_lemma_limits_chain_subcommands_run_clean() {
    let out = hid(&["verify", "--grid", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("T1<->C1"));

    let out = hid(&["lemma", "--s-max", "3", "--trials", "10", "--seed", "42"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("total failures: 0"));

    let out = hid(&["limits", "--samples", "4", "--seed", "42", "--order", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("P4->T7"));

    let out = hid(&["chain", "--samples", "3", "--seed", "42"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("T9->T10"));
}
