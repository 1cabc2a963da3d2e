use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lincent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lincent")).args(args).output().expect("binary runs")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let last = text.lines().last().expect("stderr line");
    serde_json::from_str(last).expect("JSON error on stderr")
}

fn simulate_to(path: &Path, protocol: &str, group: &str, seed: &str) {
    let out = lincent(&[
        "simulate", "--protocol", protocol, "--group", group, "--k", "3", "--m", "2",
        "--seed", seed, "--with-secrets", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn strip_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings_ms");
    v
}

#[test]
fn simulate_and_attack_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    simulate_to(&a, "double-coset", "matrix:6", "11");
    simulate_to(&b, "double-coset", "matrix:6", "11");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report = |seed: &str| {
        let out = lincent(&["attack", "--instance", a.to_str().unwrap(), "--seed", seed]);
        assert!(out.status.success());
        strip_timings(serde_json::from_slice(&out.stdout).unwrap())
    };
    assert_eq!(report("5"), report("5"));
}

#[test]
fn round_trip_verifies_for_every_protocol() {
    let dir = tempfile::tempdir().unwrap();
    for p in ["commutator", "centralizer", "braid-dh", "double-coset", "stickel"] {
        let path = dir.path().join(format!("{p}.json"));
        simulate_to(&path, p, "matrix:4", "3");
        let out = lincent(&["attack", "--instance", path.to_str().unwrap()]);
        assert!(out.status.success(), "{p}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["verified"], Value::Bool(true), "{p}");
    }
}

#[test]
fn braid_round_trip_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let out = lincent(&[
        "simulate", "--protocol", "commutator", "--group", "braid:4", "--k", "2", "--m", "1",
        "--ell", "1", "--with-secrets", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = lincent(&["attack", "--instance", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verified"], Value::Bool(true));
}

#[test]
fn truncated_instance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    simulate_to(&path, "commutator", "matrix:4", "1");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = lincent(&["attack", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "malformed_input");
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["simulate", "--protocol", "stickel", "--group", "braid:4"][..],
        &["simulate", "--protocol", "nope", "--group", "matrix:4"],
        &["simulate", "--protocol", "commutator", "--group", "ring:4"],
        &["attack", "--instance", "/nonexistent/instance.json"],
        &["bench", "--suite", "lk", "--sizes", "40"],
        &["frobnicate"],
    ] {
        let out = lincent(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_json(&out)["message"].is_string());
    }
}

#[test]
fn selfcheck_and_bench_run() {
    let out = lincent(&["selfcheck"]);
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 6 && lines.iter().all(|l| l["pass"] == Value::Bool(true)));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let out = lincent(&["bench", "--suite", "matrix-attacks", "--sizes", "4,6", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("suite,size,operation,millis,reps,dim"));
    assert_eq!(text.lines().count(), 7);
}
