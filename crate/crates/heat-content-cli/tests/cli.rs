//! End-to-end checks of the `heatc` binary: report shapes, exit codes, and
//! determinism, all through the public command-line surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn heatc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heatc"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

const DIRICHLET: &str = r#"{
    "problem": {
        "kind": "one_sided",
        "side": {},
        "at_r0": {"kind": "dirichlet"},
        "at_r1": {"kind": "dirichlet"},
        "phi": {"comps": [[1.0]]},
        "rho": {"comps": [[1.0]]}
    },
    "solver": {"n_cells": 64, "times": {"list": {"values": [0.01, 0.005, 0.0025]}}},
    "fit": {"n_terms": 2, "window": null}
}"#;

#[test]
fn coeffs_reports_the_dirichlet_expansion() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "d.json", DIRICHLET);
    let out = heatc().args(["coeffs", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let doc = json(&out);
    let beta1 = doc["theory"]["beta1"].as_f64().unwrap();
    assert!((beta1 + 4.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    assert!(doc["config_hash"].as_str().unwrap().len() == 64);
    assert!(doc["version"].as_str().is_some());
}

#[test]
fn transmittal_u0_with_unit_phi_has_vanishing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "u0.json",
        r#"{
            "problem": {
                "kind": "interface",
                "plus": {"outer": {"kind": "robin", "s": [[0.0]]}},
                "minus": {"outer": {"kind": "robin", "s": [[0.0]]}},
                "interface": {"kind": "transmittal", "u": [[0.0]]},
                "phi_plus": {"comps": [[1.0]]},
                "phi_minus": {"comps": [[1.0]]},
                "rho_plus": {"comps": [[0.3, 0.5]]},
                "rho_minus": {"comps": [[1.1]]}
            }
        }"#,
    );
    let out = heatc().args(["coeffs", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let doc = json(&out);
    // the unit field is stationary: no coupling at the interface, insulated
    // outer ends, so every row past β₀ vanishes
    for key in ["beta1", "beta2", "beta3"] {
        let v = doc["theory"][key].as_f64().unwrap();
        assert!(v.abs() < 1e-15, "{key} = {v}");
    }
}

#[test]
fn missing_condition_exits_2_with_the_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let broken = DIRICHLET.replace("\"at_r1\": {\"kind\": \"dirichlet\"},", "");
    let cfg = write_config(dir.path(), "broken.json", &broken);
    let out = heatc().args(["coeffs", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("at_r1"), "stderr: {err}");
}

#[test]
fn simulate_emits_fixed_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "d.json", DIRICHLET);
    let out = heatc().args(["simulate", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,beta,err"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], 0.01);
    // monotone in t: shorter diffusion time loses less heat
    assert!(rows[2][1] > rows[0][1]);
}

#[test]
fn verify_passes_and_a_mutated_constant_fails() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/transmittal-interface.json");
    let ok = heatc().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    let bad = heatc()
        .args(["verify", "--mutate", "a11", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let doc = json(&bad);
    let failed: Vec<&str> = doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| !v["pass"].as_bool().unwrap())
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["beta2"]);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "d.json", DIRICHLET);
    let once = heatc().args(["fit", "--config"]).arg(&cfg).output().unwrap();
    let twice = heatc().args(["fit", "--config"]).arg(&cfg).output().unwrap();
    assert!(once.status.success());
    assert_eq!(once.stdout, twice.stdout);
}

#[test]
fn relations_suite_holds_exactly() {
    let out = heatc().arg("relations").output().unwrap();
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["all_hold"], serde_json::Value::Bool(true));
    assert!(doc["total"].as_u64().unwrap() > 50);
}

#[test]
fn harness_selection_runs_only_the_named_check() {
    let out = heatc()
        .args(["harness", "--seed", "5", "separation-of-variables"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc = json(&out);
    let names: Vec<&str> = doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["separation-of-variables"]);

    let bad = heatc().args(["harness", "no-such-check"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
