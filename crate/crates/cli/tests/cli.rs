use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcdaha")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--output", &p]);
    let out = run(&full);
    let code = out.status.code().expect("exit code");
    let doc = fs::read_to_string(&path).map(|t| serde_json::from_str(&t).unwrap()).unwrap_or(Value::Null);
    (code, doc)
}

#[test]
fn verify_dunkl_symbolic_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = run_to(dir.path(), "r.json", &["verify-dunkl", "--n", "2", "--symbolic"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["params"]["t"], "t");
    assert!(doc["summary"]["checked"].as_u64().unwrap() > 0);
    assert!(doc["wall_time_ms"].is_u64());
    assert!(doc["law"].is_string());
    assert_eq!(doc["skipped"], 0);
}

#[test]
fn injected_fault_exits_two_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = run_to(dir.path(), "r.json", &["verify-dunkl", "--n", "2", "--inject-fault", "y1+1"]);
    assert_eq!(code, 2);
    let results = doc["report"]["results"].as_array().unwrap();
    let failed = results.iter().find(|r| r["status"] == "fail").expect("a failing relation");
    assert!(failed["witness"].as_str().unwrap().starts_with("X^"));
}

#[test]
fn size_guard_and_bad_input_exit_three() {
    assert_eq!(run(&["verify-dunkl", "--n", "9"]).status.code(), Some(3));
    assert_eq!(run(&["verify-dunkl", "--n", "2", "--inject-fault", "z9+1"]).status.code(), Some(3));
    assert_eq!(run(&["verify-dunkl", "--n", "2", "--no-such-flag"]).status.code(), Some(3));
    assert_eq!(run(&["build-daha", "--n", "1", "--M", "V"]).status.code(), Some(3));
    assert_eq!(run(&["theta", "--n", "1", "--g", "Z"]).status.code(), Some(3));
}

#[test]
fn tensorfield_build_has_dimension_four() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build-daha", "--M", "tensorfield", "--n", "2", "--p", "1", "--q", "1", "--mu", "1/3", "--lambda", "1/5"];
    let (code, doc) = run_to(dir.path(), "f.json", &args);
    assert_eq!(code, 0);
    assert_eq!(doc["dim"], 4);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 4);
    assert!(doc["ops"]["yt1"].is_array());
    assert_eq!(doc["summary"]["fail"], 0);
}

#[test]
fn catalog_build_reports_kappa() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = run_to(dir.path(), "v.json", &["build-daha", "--M", "V", "--n", "1", "--mu", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["dim"], 1);
    assert_eq!(doc["params"]["kappa2"], "-2/1");
}

#[test]
fn ddaha_report_contains_lemma_checks() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build-ddaha", "--n", "1", "--p", "1", "--q", "1", "--window", "2", "--symbolic"];
    let (code, doc) = run_to(dir.path(), "d.json", &args);
    assert_eq!(code, 0);
    let lemmas = doc["lemmas"]["results"].as_array().unwrap();
    let t = lemmas.iter().find(|r| r["relation"] == "lemma-T").expect("lemma-T present");
    assert_eq!(t["status"], "ok");
    assert!(doc["basis"][0][0]["coeff_num"].is_string());
}

#[test]
fn theta_prints_trace_coefficients() {
    let out = run(&["theta", "--g", "Z+1/Z", "--n", "1", "--p", "1", "--q", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["trace_coefficients"]["tr(X^1)"], "1");
    assert_eq!(doc["constant"], "0");
    let out = run(&["theta", "--g", "Z+1/Z", "--n", "2", "--p", "1", "--q", "2", "--sigma", "1/3"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    // t = 2n/N + σ(q−p) = 4/3 + 1/3, constant σ(p²−q²) = −1.
    assert_eq!(doc["trace_coefficients"]["tr(X^1)"], "5/3");
    assert_eq!(doc["constant"], "-1");
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build-ddaha", "--n", "1", "--window", "2", "--seed", "7", "--deterministic"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let (_, doc) = run_to(dir.path(), "x.json", &args);
    assert_eq!(doc["seed"], 7);
    assert!(doc["wall_time_ms"].is_null());
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "n = 2\nsymbolic = true\ninject_fault = y2-1/2\n").unwrap();
    let (code, doc) = run_to(dir.path(), "c.json", &["verify-dunkl", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(doc["config"]["inject_fault"], "y2-1/2");
    assert_eq!(doc["config"]["n"], 2);
    fs::write(&cfg, "n 2\n").unwrap();
    assert_eq!(run(&["verify-dunkl", "--config", cfg.to_str().unwrap()]).status.code(), Some(3));
}
