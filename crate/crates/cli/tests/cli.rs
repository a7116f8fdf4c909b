use std::process::{Command, Output};

use serde_json::Value;

fn qcch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcch"))
        .args(args)
        .env_remove("QCCH_MAX_DIM")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--output", "json"]);
    let out = qcch(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("single JSON document")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("qcch-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn code_info_parameters() {
    let out = qcch(&["code-info"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[[5,1,3]]"));
    let nine = json(&["code-info", "--code", "nine-qubit"]);
    assert_eq!(nine["parameters"], "[[9,1,4,3]]");
    assert_eq!(nine["gauge_x"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(
        qcch(&["code-info", "--code", "no-such-code"]).status.code(),
        Some(2)
    );
    let broken = temp_file("broken.json", "{ not json");
    assert_eq!(
        qcch(&["code-info", "--code", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let invalid = temp_file(
        "invalid.json",
        r#"{"name":"bad","n":2,"generators":["XI","ZI"],"logical_x":[],"logical_z":[],"gauge_x":[],"gauge_z":[]}"#,
    );
    assert_eq!(
        qcch(&["code-info", "--code", invalid.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qcch(&["spectrum", "--J", "-1"]).status.code(), Some(2));
    assert_eq!(qcch(&["spectrum", "--levels", "0"]).status.code(), Some(2));
    assert_eq!(
        qcch(&["compile", "--pauli", "XQ", "--t", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qcch(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn caps_and_divergence_exit_3() {
    assert_eq!(qcch(&["perturb", "--x", "0.2"]).status.code(), Some(3));
    assert_eq!(
        qcch(&["perturb", "--x", "0.001", "--order", "9"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qcch(&["perturb", "--x", "0.001", "--max-dim", "4"])
            .status
            .code(),
        Some(3)
    );
    let out = Command::new(env!("CARGO_BIN_EXE_qcch"))
        .args(["perturb", "--x", "0.001"])
        .env("QCCH_MAX_DIM", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spectrum_levels() {
    let s = json(&["spectrum"]);
    let degeneracies: Vec<u64> = s["spectrum"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["degeneracy"].as_u64().unwrap())
        .collect();
    assert_eq!(degeneracies, vec![2, 8, 12, 8, 2]);
    assert_eq!(s["dense_check"], true);
    let r2 = json(&["spectrum", "--levels", "2"]);
    assert_eq!(r2["terms"], 24);
    assert_eq!(r2["dense_check"], Value::Null);
    let empty = temp_file(
        "empty.json",
        r#"{"name":"free","n":2,"generators":[],"logical_x":["XI","IX"],"logical_z":["ZI","IZ"],"gauge_x":[],"gauge_z":[]}"#,
    );
    let e = json(&["spectrum", "--code", empty.to_str().unwrap()]);
    assert_eq!(e["spectrum"]["levels"].as_array().unwrap().len(), 1);
}

#[test]
fn perturb_report() {
    let r = json(&["perturb", "--x", "0.001", "--order", "2"]);
    let report = &r["report"];
    assert_eq!(report["first_order_vanishes"], true);
    assert_eq!(report["second_order"]["proportional"], true);
    assert!(
        report["second_order"]["coefficient"]
            .as_f64()
            .unwrap()
            .abs()
            <= 15.0
    );
    assert_eq!(r["gamma"], 0.001);
    let zero = json(&["perturb", "--x", "0"]);
    assert_eq!(zero["report"]["truncation_bound"], 0.0);
}

#[test]
fn seeded_output_is_reproducible() {
    let args = [
        "perturb", "--x", "0.002", "--seed", "11", "--order", "3", "--output", "json",
    ];
    let a = qcch(&args);
    let b = qcch(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = qcch(&[
        "perturb", "--x", "0.002", "--seed", "12", "--order", "3", "--output", "json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn threshold_and_counts() {
    let five = json(&["threshold"]);
    assert!((five["threshold"]["gamma_star"].as_f64().unwrap() - 0.0020901).abs() < 1e-6);
    let nine = json(&["threshold", "--code", "nine-qubit", "--J", "2"]);
    assert!((nine["threshold"]["gamma_star"].as_f64().unwrap() - 0.0019936).abs() < 1e-6);
    assert_eq!(nine["threshold"]["J"], 2.0);
    let c = json(&["counts", "--code", "nine-qubit"]);
    assert_eq!(c["counts"]["same_error_processes"], 27);
    assert_eq!(c["counts"]["leakage_channel"], 44);
}

#[test]
fn suppress_curve() {
    let s = json(&["suppress", "--x", "0.001", "--levels", "3"]);
    let curve = s["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 4);
    let xs: Vec<f64> = curve.iter().map(|p| p["x"].as_f64().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(qcch(&["suppress"]).status.code(), Some(2));
}

#[test]
fn barrier_witness() {
    let b = json(&["barrier"]);
    assert_eq!(b["barrier"]["barrier"], 1.0);
    assert_eq!(b["barrier"]["exact"], true);
    assert_eq!(b["barrier"]["witness"].as_array().unwrap().len(), 3);
    let capped = json(&["barrier", "--levels", "2", "--max-states", "10"]);
    assert_eq!(capped["barrier"]["exact"], false);
}

#[test]
fn compile_outputs() {
    let out = qcch(&["compile", "--pauli", "XXXX", "--t", "0.25"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# depth 3"));
    let circuit: qcch_core::PulseCircuit = text.parse().unwrap();
    assert_eq!(circuit.depth(), 3);
    let j = json(&["compile", "--pauli", "XZZXI", "--t", "0.25"]);
    assert_eq!(j["depth"], 5);
    assert!(j["unitary_error"].as_f64().unwrap() < 1e-10);
    let step = json(&["compile", "--t", "0.1", "--steps", "4"]);
    assert_eq!(step["circuit"]["steps"], 4);
    let logical = json(&["compile", "--logical", "Z", "--code", "nine-qubit"]);
    assert_eq!(logical["depth"], 1);
    assert_eq!(qcch(&["compile", "--pauli", "XX"]).status.code(), Some(2));
}

#[test]
fn every_subcommand_emits_schema() {
    for args in [
        vec!["code-info"],
        vec!["spectrum"],
        vec!["perturb", "--x", "0.001"],
        vec!["threshold"],
        vec!["counts"],
        vec!["suppress", "--x", "0.001"],
        vec!["barrier"],
        vec!["compile", "--pauli", "ZZ", "--t", "1"],
    ] {
        let v = json(&args);
        let schema = v["schema"].as_str().unwrap();
        assert!(
            schema.starts_with("qcch.") && schema.ends_with(".v1"),
            "{schema}"
        );
    }
}
