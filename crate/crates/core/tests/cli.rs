use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn grouplin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grouplin")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_group_reports_the_broken_triple() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"name":"bad","elements":["a","b","c"],"table":[[0,1,2],[1,0,0],[2,0,1]]}"#);
    let out = grouplin(&["verify-group", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not associative"));
    let ok = grouplin(&["verify-group", "catalog:Q8"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["order"], 8);
}

#[test]
fn reduce_solve_eval_chain() {
    let dir = tempfile::tempdir().unwrap();
    let system = dir.path().join("system.json");
    let sys = system.to_str().unwrap();
    let out = grouplin(&["reduce", "catalog:one-edge", "--template", "catalog:id-Z2", "--eps", "1/4", "--out", sys]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equations"], 128);

    let brute = grouplin(&["solve", sys, "--method", "brute", "--side", "g1"]);
    assert_eq!(json(&brute)["value"], "7/8");
    let capped = grouplin(&["solve", sys, "--method", "brute", "--cap", "4"]);
    assert_eq!(capped.status.code(), Some(3));
    let env_capped = Command::new(env!("CARGO_BIN_EXE_grouplin"))
        .args(["solve", sys, "--method", "brute"])
        .env("GROUPLIN_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(env_capped.status.code(), Some(3));

    let assignment = serde_json::to_string(&json(&brute)["assignment"]).unwrap();
    let a = write(dir.path(), "a.json", &assignment);
    let eval = grouplin(&["eval", sys, "--assignment", &a, "--side", "g1"]);
    assert_eq!(json(&eval)["value"], "7/8");
    let expect = grouplin(&["solve", sys, "--method", "expect"]);
    assert_eq!(json(&expect)["value"], "1/2");
}

#[test]
fn decode_and_pipeline() {
    let out = grouplin(&["decode", "catalog:one-edge", "--template", "catalog:id-Z2", "--eps", "1/8", "--delta", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["omega"], 1);
    assert_eq!(v["derandomized"]["value"], "1");
    assert_eq!(v["derandomized"]["hD"]["u1"], "d1");

    let p = grouplin(&["pipeline", "catalog:one-edge", "--template", "catalog:id-Z2", "--eps", "1/4", "--delta", "1/4"]);
    assert_eq!(json(&p)["completeness"], "7/8");
    let zero = grouplin(&["pipeline", "catalog:one-edge", "--template", "catalog:id-Z2", "--eps", "0", "--delta", "1/4"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn decode_without_omega_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let family = write(dir.path(), "family.json", r#"{"side":"g2","A":{"v1":[0,0]},"B":{"u1":[0,0,0,0]}}"#);
    let out = grouplin(&[
        "decode", "catalog:one-edge", "--template", "catalog:id-Z2", "--family", &family, "--eps", "1/8", "--delta", "1/4",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn selftest_exit_codes() {
    let ok = grouplin(&["selftest"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["failed"], 0);
    let strict = grouplin(&["selftest", "fourier", "--tol", "1e-15"]);
    assert_ne!(strict.status.code(), Some(0));
}

#[test]
fn irreps_output_shape() {
    let out = grouplin(&["irreps", "catalog:S3", "--seed", "3"]);
    let v = json(&out);
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2]);
    assert_eq!(v[2]["matrices"].as_array().unwrap().len(), 6);
}
