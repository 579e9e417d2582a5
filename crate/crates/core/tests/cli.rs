use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ydiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ydiag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const STAR_BLACK2: &str = r#"{"white": 2, "black": 1, "edges": [[0,0],[1,0]]}"#;
const STAR_DIFF: &str = r#"{"terms": [
  {"coeff": "1/1", "graph": {"white": 2, "black": 1, "edges": [[0,0],[1,0]]}},
  {"coeff": "-1/1", "graph": {"white": 1, "black": 2, "edges": [[0,0],[0,1]]}}
]}"#;
const STAR_ALONE: &str = r#"{"terms": [
  {"coeff": "1/1", "graph": {"white": 2, "black": 1, "edges": [[0,0],[1,0]]}}
]}"#;

#[test]
fn functional_value() {
    let v = json_of(&ydiag(&["functional", "--partition", "4,3,1", "--k", "4"]));
    assert_eq!(v["value"], "64/1");
    let v = json_of(&ydiag(&["functional", "--profile=-2,2;2,2", "--k", "2"]));
    assert_eq!(v["value"], "2/1");
}

#[test]
fn embed_count_and_volume() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "star_black2.json", STAR_BLACK2);
    let g = g.to_str().unwrap();
    let v = json_of(&ydiag(&["embed", "--graph", g, "--partition", "4,3,1"]));
    assert_eq!(v["count"], "26");
    let v = json_of(&ydiag(&["embed", "--graph", g, "--profile=-2,2;2,2"]));
    assert_eq!(v["volume"], "8/3");
    let v = json_of(&ydiag(&["embed", "--graph", g, "--profile=-2,2;2,2", "--decorated", "0,0", "--z", "1/2"]));
    assert_eq!(v["value"], "5/4");
}

#[test]
fn check_poly_verdicts_are_data() {
    let dir = TempDir::new().unwrap();
    let diff = write(&dir, "star_diff.json", STAR_DIFF);
    let v = json_of(&ydiag(&["check-poly", "--sum", diff.to_str().unwrap()]));
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["residuals"], serde_json::json!({}));
    let alone = write(&dir, "star.json", STAR_ALONE);
    let v = json_of(&ydiag(&["check-poly", "--sum", alone.to_str().unwrap()]));
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["residuals"]["1"]["terms"][0]["coeff"], "2/1");
    assert_eq!(v["residuals"]["1"]["terms"][0]["decorated"], serde_json::json!([0, 0]));
}

#[test]
fn decompose_star_difference() {
    let dir = TempDir::new().unwrap();
    let diff = write(&dir, "star_diff.json", STAR_DIFF);
    let v = json_of(&ydiag(&["decompose", "--sum", diff.to_str().unwrap()]));
    assert_eq!(v["s_polynomial"]["terms"][0]["gens"], serde_json::json!([3]));
    assert_eq!(v["identity_check"]["holds"], true);
    assert_eq!(v["train_rank"], 1);
    assert_eq!(v["test_residuals"], serde_json::json!([]));
    let alone = write(&dir, "star.json", STAR_ALONE);
    let v = json_of(&ydiag(&["decompose", "--sum", alone.to_str().unwrap()]));
    assert_eq!(v["s_polynomial"], "infeasible");
}

#[test]
fn character_methods_agree() {
    let v = json_of(&ydiag(&["character", "--mu", "2", "--lambda", "3,1", "--method", "both"]));
    assert_eq!(v["value"], "4/1");
    assert_eq!(v["raw_sum"], "-4/1");
    assert_eq!(v["calibration"], "-1");
    assert_eq!(v["agree"], true);
    let v = json_of(&ydiag(&["character", "--mu", "1", "--lambda", "2,1", "--alpha", "2"]));
    assert_eq!(v["raw_sum"], "-6/1");
}

#[test]
fn maps_listing() {
    let v = json_of(&ydiag(&["maps", "--mu", "2", "--list"]));
    assert_eq!(v["count"], 3);
    assert_eq!(v["maps"].as_array().unwrap().len(), 3);
    assert_eq!(v["maps"][1]["euler_characteristic"], 1);
    assert_eq!(v["maps"][1]["orientable"], false);
}

#[test]
fn scan_and_resource_bounds() {
    let v = json_of(&ydiag(&["conjecture-scan", "--max-edges", "3"]));
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    let out = ydiag(&["conjecture-scan", "--max-edges", "6"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ydiag(&["maps", "--mu", "4,3", "--max-size", "6"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(ydiag(&["functional", "--partition", "1,2", "--k", "2"]).status.code(), Some(2));
    assert_eq!(ydiag(&["functional", "--partition", "2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(ydiag(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ydiag(&["functional", "--bogus"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"white": 2, "black": 1, "edges": [[0,0]]}"#);
    let out = ydiag(&["embed", "--graph", bad.to_str().unwrap(), "--partition", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_is_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", STAR_BLACK2);
    let g = g.to_str().unwrap();
    let a = json_of(&ydiag(&["--threads", "1", "mc", "--graph", g, "--partition", "4,3,1", "--samples", "100000", "--seed", "4"]));
    let b = json_of(&ydiag(&["--threads", "3", "mc", "--graph", g, "--partition", "4,3,1", "--samples", "100000", "--seed", "4"]));
    assert_eq!(a["estimate"], b["estimate"]);
    assert_eq!(a["stderr"], b["stderr"]);
    assert_eq!(a["seed"], 4);
    let est = a["estimate"].as_f64().unwrap();
    assert!((est - 26.0).abs() < 4.0 * a["stderr"].as_f64().unwrap());
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = ydiag(&["conjecture-scan", "--max-edges", "3", "--mode", "random", "--trials", "50", "--seed", "9"]);
    let b = ydiag(&["conjecture-scan", "--max-edges", "3", "--mode", "random", "--trials", "50", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}
