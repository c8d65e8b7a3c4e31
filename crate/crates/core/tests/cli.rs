//! End-to-end runs of the `swanson` binary.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, Output};

use serde_json::Value;

fn swanson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swanson"))
        .args(args)
        .env("SWANSON_LOG", "error")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = swanson(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_soliton_is_bounded() {
    let v = json(&["analyze", "--profile", "sech2", "--alpha", "0", "--beta", "0"]);
    assert_eq!(v["domain"]["class"], "BoundedInterval");
    assert!((v["domain"]["zminus"].as_f64().unwrap() + FRAC_PI_2).abs() < 1e-9);
    assert!((v["domain"]["zplus"].as_f64().unwrap() - FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn analyze_raw_mass_is_unbounded() {
    let v = json(&["analyze", "--m", "1/(1+x^2)", "--alpha", "0", "--beta", "0"]);
    assert_eq!(v["domain"]["class"], "UnboundedLine");
    assert!(v["domain"]["zplus"].is_null());
}

#[test]
fn analyze_explicit_b() {
    let v = json(&["analyze", "--A", "1", "--B", "x/2", "--alpha", "0.2", "--beta", "-0.2"]);
    assert!(v["commutator_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn spectrum_ladder() {
    let v = json(&["spectrum", "--profile", "nonlinear-osc", "--alpha", "0", "--beta", "0"]);
    assert_eq!(v["method"], "Ladder");
    let e: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| l["E"].as_f64().unwrap()).collect();
    assert_eq!(&e[..3], &[0.5, 1.5, 2.5]);
    assert_eq!(v["levels"][1]["parity"], "odd");
}

#[test]
fn spectrum_box_exact_and_approx() {
    let v = json(&["spectrum", "--profile", "sech2", "--n-max", "4"]);
    for l in v["levels"].as_array().unwrap() {
        let n = l["n"].as_f64().unwrap();
        let e = l["E"].as_f64().unwrap();
        assert!(e >= n * n && e <= n * n + 0.6168503);
    }
    let v = json(&["spectrum", "--profile", "sech2", "--n-max", "4", "--method", "box-approx"]);
    let e: Vec<f64> = v["levels"].as_array().unwrap().iter().map(|l| l["E"].as_f64().unwrap()).collect();
    assert_eq!(e, vec![1.0, 4.0, 9.0, 16.0]);
}

#[test]
fn deferred_profile_exits_three() {
    let out = swanson(&["spectrum", "--profile", "exp-mass"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--oracle"));
    let v = json(&["spectrum", "--profile", "exp-mass", "--oracle", "--n-max", "5"]);
    assert_eq!(v["method"], "OracleX");
    assert_eq!(v["levels"].as_array().unwrap().len(), 5);
    assert!(v["checks"][0]["detail"].as_str().unwrap().contains("half-line"));
}

#[test]
fn oracle_differences_are_small() {
    let v = json(&["spectrum", "--profile", "sech2", "--n-max", "3", "--oracle"]);
    let oracle = v["oracle"].as_array().unwrap();
    assert_eq!(oracle.len(), 2);
    for o in oracle {
        for d in o["differences"].as_array().unwrap() {
            assert!(d["abs_diff"].as_f64().unwrap() < 1e-4);
        }
    }
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(swanson(&["analyze"]).status.code(), Some(2));
    assert_eq!(swanson(&["analyze", "--profile", "sech2", "--m", "1"]).status.code(), Some(2));
    assert_eq!(swanson(&["analyze", "--profile", "nope"]).status.code(), Some(2));
    assert_eq!(swanson(&["analyze", "--m", "1/(1+"]).status.code(), Some(2));
    assert_eq!(swanson(&["analyze", "--profile", "sech2", "--w", "3"]).status.code(), Some(2));
    assert_eq!(swanson(&["bogus"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_four() {
    // the mass vanishes at x = 0
    assert_eq!(swanson(&["analyze", "--A", "x"]).status.code(), Some(4));
}

#[test]
fn verify_reports_checks() {
    let v = json(&["verify", "--profile", "sech2"]);
    let witness = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "non_isospectrality_witness").unwrap();
    assert_eq!(witness["status"], "PASS");
    let v = json(&["verify", "--profile", "nonlinear-osc"]);
    let ladder = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "ladder_oracle").unwrap();
    assert_eq!(ladder["status"], "PASS");
    let v = json(&["verify", "--A", "1", "--alpha", "0.2", "--beta", "-0.2"]);
    let residual = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "similarity_residual").unwrap();
    assert_eq!(residual["status"], "PASS");
}

#[test]
fn tables_cover_both_groups() {
    let v = json(&["tables"]);
    assert_eq!(v["isospectral"].as_array().unwrap().len(), 5);
    let gauss = &v["not_isospectral"][1];
    assert_eq!(gauss["approx_law"], "pi n^2");
    assert!((gauss["approx"][0]["E"].as_f64().unwrap() - PI).abs() < 1e-9);
    assert!((gauss["approx"][1]["E"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
    assert!(v["isospectral"][4]["note"].as_str().unwrap().starts_with("semi-bounded"));
}

#[test]
fn reports_round_trip_byte_for_byte() {
    let out = swanson(&["spectrum", "--profile", "gauss", "--oracle", "--n-max", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(swanson::report::reformat(&text).unwrap(), text);
}

#[test]
fn config_file_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"profile": "gamma-rational", "params": {"gamma": 3}, "n_max": 2}"#).unwrap();
    let report = dir.path().join("out.json");
    let wf = dir.path().join("wf");
    let out = swanson(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
        "--emit-wavefunctions",
        "--wavefunction-dir",
        wf.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    let csv = std::fs::read_to_string(wf.join("gamma-rational_n0.csv")).unwrap();
    assert!(csv.starts_with("x,z,phi,psi,psi_gs\n"));
    assert_eq!(csv.lines().count(), 42);

    let csv = String::from_utf8(swanson(&["analyze", "--profile", "cosh2", "--format", "csv", "--samples", "3", "--truncation", "1"]).stdout).unwrap();
    assert!(csv.starts_with("x,z,v_eff\n-1,-1.17520119364,"), "{csv}");
}

#[test]
fn profiles_listing() {
    let v = json(&["profiles"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 8);
    assert!(names.contains(&"lorentzian2"));
}
