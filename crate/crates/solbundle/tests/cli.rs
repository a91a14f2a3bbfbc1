//! End-to-end tests of the command-line binary: exit codes, formats, and
//! the machine-readable error contract.

use std::process::{Command, Output};

fn solbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solbundle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_json_success() {
    let out = solbundle(&["analyze", "--matrix", "2,1,1,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["schema_version"], 1);
    assert_eq!(payload["rank"], 4);
    assert_eq!(payload["d_squared"], "10");
    assert_eq!(payload["objects"].as_array().unwrap().len(), 4);
    assert_eq!(payload["s_loops"]["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_rejects_non_sol() {
    let out = solbundle(&["analyze", "--matrix", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["error"]["code"], "NotSolError");
}

#[test]
fn verify_rejects_bad_determinant() {
    let out = solbundle(&["verify", "--matrix", "2,1,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["error"]["code"], "DeterminantError");
}

#[test]
fn analyze_latex_contains_tabular() {
    let out = solbundle(&["analyze", "--matrix", "2,1,1,1", "--format", "latex"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("\\begin{tabular}"));
    assert!(text.contains("$(r, N/r)$"));
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = solbundle(&["verify", "--matrix", "3,1,2,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["passed"], true);
    assert!(payload["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn verify_epsilon_minus_one_records_outcome() {
    let out = solbundle(&[
        "verify", "--matrix", "5,1,4,1", "--epsilon", "-1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "informational failures do not gate");
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["epsilon"], -1);
    let checks = payload["checks"].as_array().unwrap();
    let s_check = checks
        .iter()
        .find(|c| c["name"] == "theorem_s_matrices")
        .unwrap();
    assert_eq!(s_check["status"], "fail");
    assert_eq!(s_check["informational"], true);
    assert!(s_check["witness"].is_object());
}

#[test]
fn verify_with_conjugation() {
    let out = solbundle(&[
        "verify", "--matrix", "5,2,2,1", "--conjugate-by", "0,-1,1,0", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    let names: Vec<&str> = payload["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"conjugation_d_theta_multiset"));
    assert!(names.contains(&"conjugation_t_multiset"));
}

#[test]
fn verify_rejects_non_unimodular_conjugation() {
    let out = solbundle(&[
        "verify", "--matrix", "5,2,2,1", "--conjugate-by", "2,0,0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_z5_rows() {
    let out = solbundle(&["oracle", "--matrix", "2,1,1,1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 5, "header plus five solutions");
}

#[test]
fn oracle_degenerate_trace_minus_three() {
    let out = solbundle(&["oracle", "--matrix", "0,1,-1,-3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["degenerate"], true);
    assert_eq!(payload["rows"].as_array().unwrap().len(), 1);
    assert_eq!(payload["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn analyze_degenerate_is_structured_success() {
    let out = solbundle(&["analyze", "--matrix", "0,1,-1,-3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["degenerate"], true);
    assert_eq!(payload["rank"], 0);
    assert_eq!(payload["objects"].as_array().unwrap().len(), 0);
}

#[test]
fn batch_small_sweep() {
    let out = solbundle(&[
        "batch", "--trace-range", "7", "--entry-bound", "10", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "all rows pass");
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("a,b,c,d,trace"));
    assert!(text.lines().last().unwrap().starts_with("# aggregate"));
    // both trace signs appear
    assert!(text.lines().any(|l| l.starts_with('-') || l.contains(",-7,") || l.contains(",-6,")));
}

#[test]
fn batch_empty_range_header_only() {
    let out = solbundle(&[
        "batch", "--trace-range", "2", "--entry-bound", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 1, "header only");
}

#[test]
fn batch_jsonl_aggregate() {
    let out = solbundle(&[
        "batch", "--trace-range", "5", "--entry-bound", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let last = text.lines().last().unwrap();
    let agg: serde_json::Value = serde_json::from_str(last).unwrap();
    assert!(agg["aggregate"]["total"].as_u64().unwrap() > 0);
    assert_eq!(agg["aggregate"]["fail"], 0);
}

#[test]
fn batch_rejects_pretty_format() {
    let out = solbundle(&[
        "batch", "--trace-range", "5", "--entry-bound", "3", "--format", "pretty",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_command_emits_object_rows() {
    let out = solbundle(&["table", "--matrix", "5,1,4,1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 1 + 7, "header plus seven objects");
}

#[test]
fn matrix_file_input() {
    let dir = std::env::temp_dir();
    let path = dir.join("solbundle_cli_test_matrix.json");
    std::fs::write(&path, r#"{"matrix": [2,1,1,1]}"#).unwrap();
    let out = solbundle(&[
        "analyze",
        "--matrix-file",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["n"], 5);
    std::fs::remove_file(&path).ok();
}

#[test]
fn output_file_and_metadata_header() {
    let dir = std::env::temp_dir();
    let path = dir.join("solbundle_cli_test_output.csv");
    let out = solbundle(&[
        "analyze",
        "--matrix",
        "2,1,1,1",
        "--format",
        "csv",
        "--metadata",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# solbundle"));
    assert!(text.contains("generated-at-unix"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn max_n_guard() {
    let out = solbundle(&["analyze", "--matrix", "999,2,499,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["error"]["code"], "ResourceLimit");

    // raising the bound admits the bundle (oracle: enumeration only)
    let out = solbundle(&[
        "oracle", "--matrix", "999,2,499,1", "--format", "json", "--max-n", "2000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload: serde_json::Value = serde_json::from_str(stdout_str(&out).trim()).unwrap();
    assert_eq!(payload["rows"].as_array().unwrap().len(), 1002);
}

#[test]
fn epsilon_rejects_garbage() {
    let out = solbundle(&["analyze", "--matrix", "2,1,1,1", "--epsilon", "7"]);
    assert_eq!(out.status.code(), Some(2));
}
