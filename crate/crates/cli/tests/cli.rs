use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn volpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volpoly")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name).display().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("volpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn realize_json_is_verified() {
    let doc = stdout_json(&volpoly(&["realize", "2", "3", "2", "--json"]));
    assert_eq!(doc["verified"], true);
    assert_eq!(doc["case"], "Case1");
    for key in ["P", "Q", "reduction"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn realize_definite_exits_one() {
    let out = volpoly(&["realize", "1", "0", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("definite form: AC > B²"));
}

#[test]
fn realize_negative_exits_one() {
    assert_eq!(volpoly(&["realize", "-1", "2", "2"]).status.code(), Some(1));
}

#[test]
fn realize_zero_gives_two_points() {
    let doc = stdout_json(&volpoly(&["realize", "0", "0", "0", "--json"]));
    assert_eq!(doc["P"]["vertices"], serde_json::json!([[0, 0]]));
    assert_eq!(doc["Q"]["vertices"], serde_json::json!([[0, 0]]));
}

#[test]
fn realize_writes_svg() {
    let path = temp_path("realize.svg");
    let out = volpoly(&["realize", "2", "3", "2", "--svg", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("<svg"));
}

#[test]
fn reduce_report() {
    let doc = stdout_json(&volpoly(&["reduce", "2", "3", "2", "--json"]));
    assert_eq!(doc["reduced"], serde_json::json!({"a": 2, "b": 1, "c": 2}));
    assert_eq!(doc["steps"], serde_json::json!([1]));
    assert_eq!(doc["sign_convention"], "a*x^2 + 2*b*x*y - c*y^2");
    assert_eq!(volpoly(&["reduce", "1", "0", "1"]).status.code(), Some(1));
}

#[test]
fn mixedvol_and_volpoly_on_example_pair() {
    let pair = fixture("fixtures/example_pair.json");
    let doc = stdout_json(&volpoly(&["mixedvol", &pair, "--json"]));
    assert_eq!(doc["mixed_volume"], 11);
    let doc = stdout_json(&volpoly(&["volpoly", &pair, "--json"]));
    assert_eq!(doc, serde_json::json!({"A": 12, "B": 11, "C": 6}));
}

#[test]
fn tropical_json_has_exact_rationals() {
    let doc = stdout_json(&volpoly(&["tropical", "2", "3", "2", "--seed", "0", "--json"]));
    assert_eq!(doc["intersection_numbers"], serde_json::json!({"ff": 2, "fg": 3, "gg": 2}));
    let v = &doc["curves"]["f"]["vertices"][0][0];
    assert!(v.as_str().unwrap().contains('/'));
    assert_eq!(doc["sampler"]["retry_cap"], 64);
    let again = stdout_json(&volpoly(&["tropical", "2", "3", "2", "--json"]));
    assert_eq!(doc, again, "default seed is 0");
}

#[test]
fn tropical_zero_triple_gives_empty_curves() {
    let doc = stdout_json(&volpoly(&["tropical", "0", "0", "0", "--json"]));
    assert_eq!(doc["intersection_numbers"], serde_json::json!({"ff": 0, "fg": 0, "gg": 0}));
    assert_eq!(doc["curves"]["f"]["vertices"], serde_json::json!([]));
}

#[test]
fn tropical_retry_cap_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_volpoly"))
        .args(["tropical", "1", "1", "1", "--json"])
        .env("VOLPOLY_RETRY_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["sampler"]["retry_cap"], 5);
    let bad = Command::new(env!("CARGO_BIN_EXE_volpoly"))
        .args(["tropical", "1", "1", "1"])
        .env("VOLPOLY_RETRY_CAP", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn tropical_svg_respects_clip() {
    let path = temp_path("tropical.svg");
    let out = volpoly(&["tropical", "1", "1", "1", "--svg", path.to_str().unwrap(), "--clip", "-1000,-1000,1000,1000"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains(r#"viewBox="0.00 0.00 64064.00 64064.00""#));
}

#[test]
fn toric_json_schema() {
    let doc = stdout_json(&volpoly(&["toric", "2", "3", "2", "--json"]));
    assert_eq!(doc["intersection_matrix"], serde_json::json!([[2, 3], [3, 2]]));
    assert_eq!(doc["rays"].as_array().unwrap().len(), 6);
    assert!(doc["divisors"]["D"].is_array() && doc["divisors"]["E"].is_array());
    let smooth = stdout_json(&volpoly(&["toric", "5", "7", "3", "--smooth", "--json"]));
    assert_eq!(smooth["smooth"], true);
}

#[test]
fn sweep_counts() {
    let doc = stdout_json(&volpoly(&["sweep", "--bound", "5", "--json"]));
    assert_eq!(doc["checked"], 137);
    assert_eq!(doc["failures"], serde_json::json!([]));
    let zero = stdout_json(&volpoly(&["sweep", "0", "--json"]));
    assert_eq!(zero["checked"], 1);
    let par = stdout_json(&volpoly(&["sweep", "6", "--parallel", "--json"]));
    let ser = stdout_json(&volpoly(&["sweep", "6", "--json"]));
    assert_eq!(par["checked"], ser["checked"]);
    assert_eq!(par["failures"], ser["failures"]);
}

#[test]
fn render_snapshot_is_byte_exact() {
    let out = volpoly(&["render", &fixture("fixtures/example_pair.json")]);
    assert!(out.status.success());
    let expected = std::fs::read(fixture("snapshots/example_pair.svg")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), String::from_utf8(expected).unwrap());
}

#[test]
fn render_point_uses_dot_marker() {
    let out = volpoly(&["render", &fixture("fixtures/point_square.json")]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<circle").count(), 1);
}

#[test]
fn render_is_deterministic_and_writes_file() {
    let path = temp_path("render.svg");
    let pair = fixture("fixtures/example_pair.json");
    assert!(volpoly(&["render", &pair, "--svg", path.to_str().unwrap()]).status.success());
    let first = std::fs::read(&path).unwrap();
    assert!(volpoly(&["render", &pair, "--svg", path.to_str().unwrap()]).status.success());
    assert_eq!(first, std::fs::read(&path).unwrap());
}

#[test]
fn render_malformed_input_exits_one() {
    let path = temp_path("bad.json");
    std::fs::write(&path, r#"{"P": 3}"#).unwrap();
    assert_eq!(volpoly(&["render", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(volpoly(&["render", "/nonexistent/pair.json"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(volpoly(&["realize", "1", "2"]).status.code(), Some(1));
    assert_eq!(volpoly(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(volpoly(&["--help"]).status.code(), Some(0));
}
