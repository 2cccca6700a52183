use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiff-lab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qdiff-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn tchakaloff_polygon_slopes() {
    let svg = scratch("t.svg");
    let v = json(&["nrp", "sigma^2-(1+q^2*x)*sigma+q^2*x", "--form", "sigma", "--svg", svg.to_str().unwrap()]);
    assert_eq!(v["schema"], "qdiff-lab/1");
    assert_eq!(v["results"]["polygon"]["slopes"], serde_json::json!(["-1/1", "0/1"]));
    let drawing = std::fs::read_to_string(&svg).unwrap();
    assert!(drawing.starts_with("<svg") && drawing.contains("polygon"));
}

#[test]
fn bessel_entry_verifies() {
    let v = json(&["catalog", "Bq", "--verify"]);
    let check = &v["results"]["verify"];
    assert_eq!(check["passed"], true);
    assert_eq!(check["detected_orders"]["s2"], -2);
    assert_eq!(check["polygon_slopes"], serde_json::json!(["-1/2", "0/1"]));
}

#[test]
fn eq_sizes_increase() {
    let v = json(&["size", "--catalog", "Eq", "--trunc", "60"]);
    assert_eq!(v["results"]["totals_increasing"], true);
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 59);
}

#[test]
fn output_is_deterministic() {
    let args = ["gevrey", "--gen", "Tq", "--trunc", "30"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn coefficient_file_input() {
    let path = scratch("geom.txt");
    let lines: Vec<String> = (0..20).map(|n| format!("1/q^{n}")).collect();
    std::fs::write(&path, lines.join("\n")).unwrap();
    let short = run(&["annihilate", "--coeffs", path.to_str().unwrap()]);
    assert_eq!(short.status.code(), Some(2));
    let v = json(&["annihilate", "--coeffs", path.to_str().unwrap(), "--max-deg", "2"]);
    assert_eq!(v["results"]["order"], 1);
    assert_eq!(v["results"]["annihilates_prefix"], true);
}

#[test]
fn fourier_commutes_on_normalized_input() {
    let v = json(&["fourier", "x^2*dq^2 - x*dq - 1", "--kind", "plus"]);
    assert_eq!(v["results"]["polygon_commutes"], true);
    let v = json(&["fourier", "sigma^2-(1+q^2*x)*sigma+q*x"]);
    assert_eq!(v["results"]["polygon_commutes"], true);
}

#[test]
fn nilpotent_companion_decays() {
    let v = json(&["nilpotent", "sigma^2 - 2*sigma + 1", "--m", "2,3", "--verify"]);
    for place in v["results"]["places"].as_array().unwrap() {
        assert_eq!(place["flags_agree"], true);
        assert_eq!(place["decay"]["holds"], true);
    }
}

#[test]
fn local_solutions_and_casorati() {
    let op = "sigma^2 - (q^2*x + 1)*sigma + q*x";
    let v = json(&["local-solve", op, "--xi", "2/7", "--trunc", "8", "--verify"]);
    assert_eq!(v["results"]["solutions"].as_array().unwrap().len(), 2);
    let v = json(&["casorati", op, "--verify"]);
    assert_eq!(v["results"]["residual_zero"], true);
}

#[test]
fn hermite_pade_report() {
    let v = json(&["hermite-pade", "--pair", "eq", "--n", "8"]);
    assert_eq!(v["results"]["determinant_nonzero"], true);
    assert_eq!(v["results"]["degree_bounds_hold"], true);
}

#[test]
fn failed_verification_exits_one() {
    let out = run(&["check", "sigma^2-(1+q^2*x)*sigma+q^2*x", "--gen", "Tq", "--verify"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["check", "sigma^2-(1+q^2*x)*sigma+q*x", "--gen", "Tq", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nrp", "sigma^2 +* x"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let out = run(&["nrp", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero operator"));
    assert_eq!(run(&["fourier", "sigmap - z", "--inverse"]).status.code(), Some(3));
}
