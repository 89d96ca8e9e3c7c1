use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn plectic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plectic")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn spec_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plectic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn reducible_polynomial_is_bad_input() {
    let path = spec_file("reducible.json", r#"{"poly": [-1, 0, 1]}"#);
    let out = plectic(&["report", "--field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "NotIrreducible");
}

#[test]
fn cubic_without_units_is_rejected() {
    let path = spec_file("cubic.json", r#"{"poly": [1, -2, -1, 1]}"#);
    let out = plectic(&["extension-class", "--field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "UnitsRequired");
}

#[test]
fn cubic_with_units_is_nontrivial() {
    let path = spec_file("cubic-units.json", r#"{"poly": [1, -2, -1, 1], "units": [[0, 1, 0], [-1, 1, 0]]}"#);
    let out = plectic(&["extension-class", "--field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "nontrivial");
}

#[test]
fn quadratic_spec_gets_computed_unit() {
    let path = spec_file("golden.json", r#"{"poly": [-1, -1, 1]}"#);
    let out = plectic(&["field-info", "--field", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["quadratic_m"], 5);
    assert_eq!(doc["units"]["provenance"], "computed");
}

#[test]
fn non_squarefree_m_is_bad_input() {
    let out = plectic(&["field-info", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "InvalidM");
}

#[test]
fn unknown_flag_reports_json_error() {
    let out = plectic(&["report", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "BadArgument");
}

#[test]
fn both_field_sources_conflict() {
    let out = plectic(&["report", "--m", "5", "--field", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cusp_resolution_for_golden_field() {
    let out = plectic(&["cusp-resolution", "--m", "5"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["cycle"], serde_json::json!([3]));
    assert_eq!(doc["period_matrix"], serde_json::json!([[3, -1], [1, 0]]));
}

#[test]
fn sabotaged_selftest_fails_with_exit_one() {
    let out = plectic(&["selftest", "--only", "regulator", "--sabotage", "rowsum"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("FAIL regulator"), "{text}");
    assert!(text.contains("row sums contain 0"));
}

#[test]
fn selftest_subset_passes() {
    let out = plectic(&["selftest", "--only", "plectic,cusp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS plectic") && text.contains("PASS cusp"));
    assert!(text.ends_with("2 suites, 0 failed\n"));
}

#[test]
fn unknown_suite_is_bad_input() {
    let out = plectic(&["selftest", "--only", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cohomology_table_by_dimension() {
    let out = plectic(&["cohomology-table", "--r", "3", "--s", "0"]);
    assert!(out.status.success());
    let out = plectic(&["cohomology-table", "--r", "3", "--s", "0", "--format", "table"]);
    assert!(out.status.success());
    assert!(!out.stdout.is_empty());
}

#[test]
fn builtin_family_passes() {
    let out = plectic(&["plectic-check", "--family", "builtin"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["failed"], 0);
    assert_eq!(doc["passed"], true);
}
