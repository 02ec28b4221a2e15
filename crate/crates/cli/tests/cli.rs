use std::process::{Command, Output};

use serde_json::Value;

fn lalescu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lalescu"))
        .args(args)
        .env_remove("LALESCU_ORACLE_DIGITS")
        .env_remove("LALESCU_SLACK_ULPS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_small_range_as_json() {
    let out = lalescu(&["verify", "--from", "1", "--to", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let doc: Value = serde_json::from_str(&text).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["n"], 1);
    assert_eq!(entries[0]["verdict"], "Yes");
    assert_eq!(doc["summary"]["all_yes"], true);
    assert!(doc["summary"]["first_failure"].is_null());
    assert_eq!(doc["config"]["policy"]["oracle_digits"], 60);
    assert_eq!(doc["config"]["to"], 2);
    // Canonical output: parsing and re-serialising reproduces the bytes.
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", text);
}

#[test]
fn verify_text_has_one_line_per_index() {
    let out = lalescu(&["verify", "--from", "1", "--to", "10"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0].starts_with("a_1 = [0.414213562373094"));
    assert!(lines[0].ends_with("a_2 < a_1: Yes"));
    assert!(lines[9].starts_with("a_10 = ["));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&lalescu(&["verify", "--from", "5", "--to", "3"])), 64);
    assert_eq!(code(&lalescu(&["verify", "--from", "0", "--to", "3"])), 64);
    assert_eq!(code(&lalescu(&["verify", "--to", "many"])), 64);
    assert_eq!(code(&lalescu(&["frobnicate"])), 64);
    assert_eq!(code(&lalescu(&["verify", "--digits", "10"])), 64);
    let unknown = lalescu(&["audit", "no_such_bound"]);
    assert_eq!(code(&unknown), 64);
    let err = String::from_utf8(unknown.stderr).unwrap();
    assert!(err.contains("poly_468") && err.contains("final_product"));
    assert_eq!(code(&lalescu(&["crossover", "log_upper_linear"])), 64);
    assert_eq!(code(&lalescu(&["asymptotics", "nonsense"])), 64);
    assert_eq!(code(&lalescu(&["--help"])), 0);
}

#[test]
fn audit_thresholds() {
    let below = lalescu(&["audit", "poly_468", "--from", "460", "--to", "470"]);
    assert_eq!(code(&below), 64);
    assert!(String::from_utf8(below.stderr).unwrap().contains("468"));
    assert_eq!(code(&lalescu(&["audit", "poly_468", "--from", "468", "--to", "470"])), 0);
    assert_eq!(code(&lalescu(&["audit", "bracket_negative", "--from", "3", "--to", "100"])), 0);
    // A defaulted start is clamped to the threshold.
    assert_eq!(code(&lalescu(&["audit", "poly_468", "--to", "600"])), 0);
}

#[test]
fn audit_reports_certified_violation() {
    let out = lalescu(&["audit", "sq_bound_2048", "--from", "304", "--to", "310", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["summary"]["first_failure"]["n"], 304);
    assert_eq!(doc["entries"][0]["first_valid_n"], 305);
}

#[test]
fn audit_csv_and_skips() {
    let out = lalescu(&["audit", "all", "--to", "200", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("id,point,verdict"));
    assert!(text.lines().any(|l| l == "bracket_negative,3,Yes"));
    assert!(!text.contains("poly_468"));
    let json = lalescu(&["audit", "all", "--to", "200", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let skipped: Vec<&str> = doc["summary"]["skipped"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(skipped.contains(&"poly_468") && skipped.contains(&"sq_bound_2048"));
}

#[test]
fn crossover_prints_index() {
    let out = lalescu(&["crossover", "poly_468"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "468");
    let none = lalescu(&["crossover", "poly_468", "--limit", "400"]);
    assert_eq!(code(&none), 1);
    assert_eq!(stdout(&none).trim(), "none ≤ 400");
}

#[test]
fn asymptotics_csv() {
    let out = lalescu(&["asymptotics", "residual_main", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["n", "residual", "deviation", "error_bound"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3][0], "10000");
    let last: f64 = rows[3][1].parse().unwrap();
    assert!((last - 0.5).abs() < 0.005);
}

#[test]
fn precision_floor_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = lalescu(&[
        "asymptotics",
        "residual_xn",
        "--digits",
        "40",
        "--schedule",
        "1000000000000",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8(out.stderr).unwrap().contains("46"));
    assert!(!path.exists());
    // The same target at n = 10^4 clears the floor with 40 digits.
    let ok = lalescu(&[
        "asymptotics",
        "residual_xn",
        "--digits",
        "40",
        "--schedule",
        "10000",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0);
    assert!(ok.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["config"]["policy"]["oracle_digits"], 40);
    assert_eq!(doc["entries"][0]["n"], 10000);
}

#[test]
fn policy_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lalescu"))
        .args(["verify", "--to", "3", "--format", "json"])
        .env("LALESCU_ORACLE_DIGITS", "45")
        .env("LALESCU_SLACK_ULPS", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["policy"]["oracle_digits"], 45);
    assert_eq!(doc["config"]["policy"]["slack_ulps"], 4);
    assert!(doc["config"]["from"].is_null());
}

#[test]
fn robbins_and_catalog() {
    assert_eq!(code(&lalescu(&["robbins", "--to", "200"])), 0);
    let out = lalescu(&["catalog", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 23);
    let poly = entries.iter().find(|e| e["id"] == "poly_468").unwrap();
    assert_eq!(poly["min_n"], 468);
}
