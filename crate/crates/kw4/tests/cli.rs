//! End-to-end checks of the kw4 binary: exit codes, report files,
//! determinism across runs and worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn kw4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kw4"))
        .args(args)
        .output()
        .expect("spawn kw4")
}

fn write_scenario(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn report_without_wall_time(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["summary"]["wall_time_ms"] = serde_json::json!(0.0);
    v
}

#[test]
fn verify_subcommand_passes_with_exit_zero() {
    let out = kw4(&["verify", "--kind", "para", "--signature", "2,2", "--trials", "16", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("16/16 trials pass"), "{stdout}");
}

#[test]
fn verify_supports_complex_kind_and_definite_signature() {
    for (kind, sig) in [("complex", "2,2"), ("complex", "0,4")] {
        let out = kw4(&["verify", "--kind", kind, "--signature", sig, "--trials", "8"]);
        assert_eq!(out.status.code(), Some(0), "{kind} {sig}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn star_table_prints_six_pass_lines() {
    let out = kw4(&["star-table"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.matches("[pass]").count(), 6, "{stdout}");
    assert!(stdout.contains("star(e1^e3) = -e2^e4"), "{stdout}");
}

#[test]
fn example_3_2_accepts_explicit_derivatives() {
    let out = kw4(&["example-3-2", "--f", "0.3,-0.1,0.7,0.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[pass]"), "{stdout}");
}

#[test]
fn run_writes_a_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "verify.json",
        r#"{"mode": "verify", "kind": "para", "seed": 11, "trials": 12}"#,
    );
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    let out = kw4(&["run", &scenario, "--report", r1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = kw4(&["run", &scenario, "--report", r2.to_str().unwrap(), "--jobs", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report_without_wall_time(&r1), report_without_wall_time(&r2));

    let v = report_without_wall_time(&r1);
    assert_eq!(v["provenance"]["seed"], 11);
    assert_eq!(v["provenance"]["generator"], "chacha8");
    assert_eq!(v["summary"]["trials"], 12);
    assert_eq!(v["summary"]["pass_count"], 12);
}

#[test]
fn run_rejects_malformed_json_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "bad.json", r#"{"mode": "verify", trials: }"#);
    let out = kw4(&["run", &scenario]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line"), "{stderr}");
}

#[test]
fn run_rejects_unknown_fields_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "unknown.json",
        r#"{"mode": "verify", "trails": 5}"#,
    );
    let out = kw4(&["run", &scenario]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_scenario_file_is_a_parse_error() {
    let out = kw4(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_trial_exits_one() {
    // An absurdly tight tolerance turns numerically healthy trials into
    // failures; the exit-code contract still has to hold.
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "tight.json",
        r#"{"mode": "verify", "kind": "para", "seed": 5, "trials": 4, "tolerance": 1e-30}"#,
    );
    let out = kw4(&["run", &scenario]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn tolerance_flag_overrides_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "loose.json",
        r#"{"mode": "verify", "kind": "para", "seed": 5, "trials": 4}"#,
    );
    let out = kw4(&["run", &scenario, "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let out = kw4(&["run", &scenario, "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn continuation_scenario_runs_all_batteries() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "cont.json",
        r#"{"mode": "continuation", "seed": 3, "trials": 10}"#,
    );
    let report = dir.path().join("report.json");
    let out = kw4(&["run", &scenario, "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report_without_wall_time(&report);
    assert_eq!(v["summary"]["trials"], 30); // 3 batteries x 10 trials
    assert_eq!(v["summary"]["pass_count"], 30);
}

#[test]
fn uniqueness_scenario_reports_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(
        dir.path(),
        "rank.json",
        r#"{"mode": "uniqueness", "kind": "complex", "seed": 9, "trials": 6}"#,
    );
    let report = dir.path().join("report.json");
    let out = kw4(&["run", &scenario, "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = report_without_wall_time(&report);
    for rec in v["records"].as_array().unwrap() {
        assert_eq!(rec["rank"], 4);
    }
}

#[test]
fn bad_flag_exits_two() {
    let out = kw4(&["verify", "--kind", "quaternionic"]);
    assert_eq!(out.status.code(), Some(2));
}
