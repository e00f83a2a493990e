use std::process::{Command, Output};

use regex::Regex;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_falsetheta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_prints_pentagonal_coefficients() {
    let o = run(&["expand", "--expr", "f1", "--terms", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let coeffs: Vec<String> = stdout(&o).lines().map(|l| l.split(' ').nth(1).unwrap().to_string()).collect();
    assert_eq!(coeffs, ["1", "-1", "-1", "0", "0", "1", "0", "1", "0", "0", "0", "0", "-1"]);
}

#[test]
fn expand_modular_and_csv() {
    let o = run(&["expand", "--expr", "f1", "--terms", "5", "--mod", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,coefficient\n0,1\n1,2\n2,2\n3,0\n4,0\n5,1\n");
}

#[test]
fn failing_congruence_exits_one_and_lists_n0() {
    let o = run(&["verify-cong", "--series", "1/psi(5)", "--A", "8", "--B", "0", "--M", "2", "--nmax", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("n=0 value=1"));
}

#[test]
fn passing_congruence_exits_zero() {
    let o = run(&["verify-cong", "--series", "c9", "--A", "16", "--B", "12", "--M", "2", "--nmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS  c9(16n+12) = 0 mod 2  n_checked=100"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["expand", "--expr", "f0"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--expr", "f1 +"]).status.code(), Some(2));
    assert_eq!(run(&["theorem2", "--p", "5", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify-id", "no-such-identity"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let o = run(&["expand", "--expr", "f1*(q"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 6"));
}

#[test]
fn computation_errors_exit_three() {
    assert_eq!(run(&["expand", "--expr", "1/q", "--terms", "5"]).status.code(), Some(3));
    let o = run(&[
        "verify-cong",
        "--series",
        "c5",
        "--A",
        "8",
        "--B",
        "5",
        "--M",
        "8",
        "--mod",
        "4",
        "--nmax",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_report_schema() {
    let o = run(&["theorem2", "--p", "7", "--k", "0", "--nmax", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "theorem2");
    assert_eq!(v["params"]["A"], 28);
    assert_eq!(v["params"]["B"], 131);
    let r = &v["results"][0];
    assert_eq!(r["status"], "pass");
    assert_eq!(r["n_checked"], 42);
    assert!(r["violations"].as_array().unwrap().is_empty());
    assert!(r["elapsed_ms"].is_u64());
    assert!(r["name"].is_string());
}

#[test]
fn json_violations_carry_n_and_value() {
    let o = run(&["verify-id", "--lhs", "f1", "--rhs", "f2", "--terms", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = &v["results"][0]["violations"][0];
    assert_eq!(first["n"], 1);
    assert_eq!(first["value"], "-1");
    assert_eq!(first["expected"], "0");
}

#[test]
fn theorem1_output_is_deterministic() {
    let timing = Regex::new(r"\[\d+ ms\]").unwrap();
    let a = run(&["theorem1", "--terms", "4000", "--jobs", "1"]);
    let b = run(&["theorem1", "--terms", "4000", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(timing.replace_all(&stdout(&a), ""), timing.replace_all(&stdout(&b), ""));
    assert_eq!(stdout(&a).lines().filter(|l| l.starts_with("PASS")).count(), 14);
}

#[test]
fn named_identity_and_catalog() {
    let o = run(&["verify-id", "cube-2dissect", "--terms", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["catalog"]);
    let text = stdout(&o);
    assert!(text.contains("theta-mult"));
    assert!(text.contains("c5(512n+491) = 0 mod 8"));
}

#[test]
fn cache_directory_is_populated_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = run(&["expand", "--expr", "b1*c5", "--terms", "200", "--cache-dir", d]);
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(files >= 3, "root and named series cached, found {files}");
    let second = run(&["expand", "--expr", "b1*c5", "--terms", "200", "--cache-dir", d]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), files);
}

#[test]
fn density_and_audits() {
    let o = run(&["density", "--series", "c5", "--mod", "2", "--nmax", "100", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["total"], 100);
    assert_eq!(run(&["a1-formula", "--nmax", "300"]).status.code(), Some(0));
    assert_eq!(run(&["audit-valuation", "--p", "23", "--k", "0", "--nmax", "200"]).status.code(), Some(0));
}
