use std::process::{Command, Output};

use serde_json::Value;

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn n_below_two_is_a_usage_error() {
    let out = koszul(&["verify-boundary", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2"));
    assert_eq!(koszul(&["cycle", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = koszul(&["radius", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
}

#[test]
fn boundary_n2_cites_coefficient_two() {
    let out = koszul(&["verify-boundary", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["rhs_coefficient"], "2");
    assert_eq!(v["result"]["status"], "pass");
    let w = v["result"]["witness"].as_object().unwrap();
    assert_eq!(w.len(), 5);
    let minus = w.values().filter(|c| *c == "-1").count();
    assert_eq!(minus, 2);
}

#[test]
fn cycle_n2_is_not_a_boundary() {
    let out = koszul(&["cycle", "--n", "2", "--check-nonboundary"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let cert = &v["result"]["certificate"];
    assert_eq!(cert["solvable"], false);
    let (a, b) = (
        cert["rank_coefficient"].as_u64().unwrap(),
        cert["rank_augmented"].as_u64().unwrap(),
    );
    assert_eq!(b, a + 1);
    assert_eq!(v["result"]["whistle_blower_coefficient"], "-1");
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = [
        "poincare",
        "--n",
        "8",
        "--max-weight",
        "4",
        "--exact-upto",
        "3",
    ];
    let a = koszul(&args);
    let b = koszul(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let dims: Vec<u64> = v["result"]["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 1, 7, 69, 790]);
}

#[test]
fn tampered_recurrence_exits_one() {
    let out = koszul(&["recurrence", "--verify", "--tamper", "--terms", "60"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("first nonzero residual at n = 2"));
    let out = koszul(&["positivity", "--tamper", "--terms", "60"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["steps"][0]["status"], "fail");
}

#[test]
fn untampered_recurrence_passes() {
    let out = koszul(&["recurrence", "--verify", "--terms", "120"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn series_from_file_and_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("gp.txt");
    std::fs::write(&good, "# n = 8\n1 1\n8 1\n15 7\n22 69\n29 790\n36 9842\n").unwrap();
    let out = koszul(&["gap", "--gp-file", good.to_str().unwrap(), "--n", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let gap = &json(&out)["result"]["gap"];
    assert_eq!(gap["q"], 3);
    assert_eq!(gap["coefficients"][1], "1");
    assert_eq!(gap["coefficients"][2], "-1");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 1\n8 one\n").unwrap();
    let out = koszul(&["gap", "--gp-file", bad.to_str().unwrap(), "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
}

#[test]
fn invert_both_methods_and_csv() {
    let out = koszul(&[
        "--format", "csv", "invert", "--coeffs", "0,1,-1", "--order", "6", "--method", "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    // Catalan numbers
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("exponent,coefficient"));
    assert!(text.contains("\n6,42\n"));
}

#[test]
fn export_matrix_writes_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let out = koszul(&[
        "poincare",
        "--n",
        "3",
        "--max-weight",
        "3",
        "--export-matrix",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("n3-weight2.txt")).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap()[2..]
        .split(' ')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(header[0], 1);
    assert_eq!(header[2], text.lines().count() - 1);
}

#[test]
fn out_flag_and_budget_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let out = koszul(&[
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
        "radius",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .ends_with("overall: pass\n"));

    let out = Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(["verify-boundary", "--n", "3"])
        .env("KOSZUL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));
}
