use std::path::PathBuf;
use std::process::{Command, Output};

use num_bigint::BigInt;
use senlab_core::padic::PadicScalar;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn senlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_senlab")).args(args).env_remove("SENLAB_PREC").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn nearly_ht_example() {
    let out = senlab(&["senmod", "nearly-ht", "--field", &data("qp3sqrt3.json"), "--theta", &data("nilp2.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], Value::Bool(true));
    assert!(v["result"]["slopes"].is_array());
    assert_eq!(v["prec"], 40);
}

#[test]
fn solve_theta_closed_form() {
    let out = senlab(&["dps", "solve-theta", "--p", "3", "--g", &data("one.json"), "--trunc", "24"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["trunc"], 24);
    let coeffs = v["result"]["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 25);
    let mut fact = BigInt::from(1);
    for (n, c) in coeffs.iter().enumerate().skip(1) {
        if n > 1 {
            fact *= n - 1;
        }
        // e = 1: c_n = (-1)^(n-1) (n-1)!
        let expected = if n % 2 == 1 { fact.clone() } else { -fact.clone() };
        let got: PadicScalar = serde_json::from_value(c["coeffs"][0][0].clone()).unwrap();
        assert!(got.eq_to_prec(&PadicScalar::from_int(3, expected, 50)), "n = {n}");
    }
}

#[test]
fn malformed_theta_is_a_usage_error() {
    let out = senlab(&["senmod", "nearly-ht", "--field", &data("qp3sqrt3.json"), "--theta", r#"{"theta": [[1, 2], [3]]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "usage");
    assert!(v["error"]["message"].as_str().unwrap().contains("theta[1]"));
}

#[test]
fn exit_codes() {
    assert_eq!(senlab(&["gamma", "delta", "--p", "5", "--m", "1", "--a", "5"]).status.code(), Some(3));
    let zero = r#"{"p":3,"val":null,"unit":"0","prec":5}"#;
    assert_eq!(senlab(&["padic", "arith", "--op", "div", "--x", "1", "--y", zero]).status.code(), Some(4));
    let out = senlab(&["gamma", "invert", "--p", "3", "--m", "2", "--a", "10", "--rhs", &data("rhs8.json")]);
    assert_eq!(out.status.code(), Some(5));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("ρM"));
    let out = senlab(&["padic", "exp", "--p", "3", "--x", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("alpha"));
    assert_eq!(senlab(&["field", "info", "--p", "3", "--bogus"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["gamma", "delta", "--p", "3", "--m", "2", "--a", "10", "--nmin", "-4", "--nmax", "4"];
    let a = senlab(&args);
    let b = senlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let seq = senlab(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, seq.stdout);
}

#[test]
fn emitted_series_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("log.json");
    let out = senlab(&["dps", "log-t", "--p", "3", "--e", "3", "--trunc", "10", "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&first).unwrap()).unwrap();
    let series = serde_json::to_string(&v["result"]).unwrap();
    let again = senlab(&["dps", "coaction", "--p", "3", "--f", &series, "--b", "0"]);
    assert!(again.status.success());
    let back = json(&again);
    let (a, b) = (v["result"]["coeffs"].as_array().unwrap(), back["result"]["coeffs"].as_array().unwrap());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        let x: PadicScalar = serde_json::from_value(x["coeffs"][0][0].clone()).unwrap();
        let y: PadicScalar = serde_json::from_value(y["coeffs"][0][0].clone()).unwrap();
        assert!(x.eq_to_prec(&y));
    }
}

#[test]
fn picard_and_prec_override() {
    let out = senlab(&["picard", "boundary", "--p", "5", "--elem", "1"]);
    let v = json(&out);
    assert_eq!(v["result"]["num"], "1");
    assert_eq!(v["result"]["den_pow"], 1);
    let out = senlab(&["--prec", "12", "picard", "kernel", "--field", &data("qp3sqrt3.json"), "--s", "2"]);
    let v = json(&out);
    assert_eq!(v["prec"], 12);
    assert!(v["result"]["image_order_pow"].as_u64().unwrap() >= 1);
    let env = Command::new(env!("CARGO_BIN_EXE_senlab")).args(["picard", "witness", "--p", "3", "--k", "3"]).env("SENLAB_PREC", "17").output().unwrap();
    assert_eq!(json(&env)["prec"], 17);
    assert_eq!(json(&env)["result"]["boundary"]["den_pow"], 3);
}

#[test]
fn accept_suite_reports_per_criterion() {
    let out = senlab(&["accept", "picard"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["result"]["passed"], Value::Bool(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS  9"));
    assert_eq!(senlab(&["accept", "nonsense"]).status.code(), Some(2));
}
