use std::process::{Command, Output};

use serde_json::Value;

fn polyharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyharm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn unsupported_family_is_a_usage_error() {
    let out = polyharm(&["analyze", "--family", "icosa", "--r", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unsupported family"), "{err}");
}

#[test]
fn bad_arguments_exit_with_two() {
    for args in [
        &["analyze", "--family", "tetra", "--r", "-1"][..],
        &["analyze", "--family", "tetra", "--r", "2", "--k", "4"],
        &["coeffs", "--family", "octa", "--r", "2", "--m", "9..3"],
        &["mvp", "--family", "octa", "--k", "0", "--r", "2", "--precision", "77"],
        &["analyze", "--family", "octa"],
    ] {
        assert_eq!(polyharm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn envelope_carries_schema_version() {
    let out = polyharm(&["analyze", "--family", "octa", "--k", "0", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], "polyharm/1");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["precision_bits"], 100);
    assert_eq!(v["ok"], true);
}

#[test]
fn snapped_critical_value_is_identified() {
    let out = polyharm(&["analyze", "--family", "tetra", "--k", "1", "--r", "3.62398"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("B3Space"), "{text}");
    assert!(text.contains("\"critical\": true"), "{text}");
}

#[test]
fn failing_mean_value_check_exits_with_one() {
    let out = polyharm(&["mvp", "--family", "octa", "--k", "0", "--r", "2", "--space", "jumped"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn passing_mean_value_check_exits_with_zero() {
    let out = polyharm(&["mvp", "--family", "octa", "--k", "0", "--r", "2", "--space", "b3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("geometry.json");
    let out = polyharm(&[
        "dump-geometry",
        "--family",
        "tetra",
        "--r",
        "3/2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "dump-geometry");
    assert_eq!(v["schema_version"], "polyharm/1");
}

#[test]
fn output_is_deterministic() {
    let args = ["coeffs", "--family", "octa", "--scan", "1:2:1/2", "--k", "1"];
    let a = polyharm(&args);
    let b = polyharm(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_format_has_a_header() {
    let out = polyharm(&["dump-geometry", "--family", "octa", "--r", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("# dump-geometry (polyharm/1, 100 bits)"), "{text}");
}

#[test]
fn harmonics_emit_basis_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    let out = polyharm(&["harmonics", "--system", "a3", "--emit-basis", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ok"], true);
    let basis: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(basis.is_object() || basis.is_array());
}
