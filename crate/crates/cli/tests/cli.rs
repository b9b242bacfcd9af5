use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn robin3(dir: &Path, config: &str, extra: &[&str]) -> (i32, PathBuf) {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_robin3"))
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .status()
        .unwrap();
    (status.code().unwrap(), out)
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

fn header(path: &Path) -> Vec<String> {
    csv::Reader::from_path(path).unwrap().headers().unwrap().iter().map(String::from).collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let i = header(path).iter().position(|h| h == name).unwrap();
    rows(path).iter().map(|r| r[i].to_string()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn disk_spectrum_table_and_profile() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = robin3(dir.path(), r#"{"command": "disk-spectrum", "beta_grid": [-1, 0, 1]}"#, &[]);
    assert_eq!(code, 0);
    let csv = out.join("disk-spectrum.csv");
    let l2: Vec<f64> = column(&csv, "lambda2").iter().map(|s| num(s)).collect();
    assert!(l2[0].abs() < 1e-8);
    assert!((l2[1] - 3.389_957_717).abs() < 1e-8);
    // root of x J_0(x) = 0 inside (0, j_11) at beta = 1
    assert!((l2[2] - 2.404_825_557_695_773f64.powi(2)).abs() < 1e-8);

    let profile = out.join("profile.csv");
    assert_eq!(header(&profile), ["beta", "r", "g"]);
    assert_eq!(rows(&profile).len(), 5 * 400);
    let sidecar: Value = serde_json::from_slice(&std::fs::read(out.join("disk-spectrum.json")).unwrap()).unwrap();
    assert_eq!(sidecar["command"], "disk-spectrum");
    assert_eq!(sidecar["rows"].as_array().unwrap().len(), 3);
    assert!(sidecar["rows"][0]["runtime_seconds"].is_number());
}

#[test]
fn verify_bound_on_the_neumann_disk() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = robin3(dir.path(), r#"{"command": "verify-bound", "beta_grid": [0], "domains": [{"name": "disk"}]}"#, &[]);
    assert_eq!(code, 0);
    let csv = out.join("verify-bound.csv");
    let lhs = num(&column(&csv, "lambda3_area")[0]);
    let rhs = num(&column(&csv, "disk_bound")[0]);
    assert!((lhs - 10.65).abs() < 0.01, "{lhs}");
    assert!((rhs - 21.30).abs() < 0.01, "{rhs}");
    assert!(num(&column(&csv, "margin")[0]) > 0.0);
    assert_eq!(column(&csv, "pass"), ["true"]);
}

#[test]
fn csv_body_is_reproducible() {
    let config = r#"{"command": "verify-bound", "beta_grid": [-0.5, 0.5], "domains": [{"coeffs": [[0.2, 0]], "N": 12, "M": 4}]}"#;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ca, oa) = robin3(a.path(), config, &["--jobs", "1"]);
    let (cb, ob) = robin3(b.path(), config, &["--jobs", "2"]);
    assert_eq!((ca, cb), (0, 0));
    assert_eq!(std::fs::read(oa.join("verify-bound.csv")).unwrap(), std::fs::read(ob.join("verify-bound.csv")).unwrap());
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        "not json",
        r#"{"command": "plot"}"#,
        r#"{"command": "disk-spectrum", "beta_grid": [2.0]}"#,
        r#"{"command": "find-trial"}"#,
        r#"{"command": "verify-bound", "domains": [{"coeffs": [[0.7, 0]]}]}"#,
    ] {
        assert_eq!(robin3(dir.path(), bad, &[]).0, 1, "{bad}");
    }
}

#[test]
fn solver_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = robin3(dir.path(), r#"{"command": "domain-spectrum", "beta_grid": [0], "domains": [{"N": 4}]}"#, &[]);
    assert_eq!(code, 2);
    assert!(column(&out.join("domain-spectrum.csv"), "error")[0].starts_with("solver"));
}

#[test]
fn extended_grid_is_labeled() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = robin3(dir.path(), r#"{"command": "disk-spectrum", "beta_grid": [1]}"#, &["--extended-beta"]);
    assert_eq!(code, 0);
    let labels = column(&out.join("disk-spectrum.csv"), "in_theorem_range");
    assert_eq!(labels.len(), 51);
    assert_eq!(labels[0], "true");
    assert!(labels[1..].iter().all(|l| l == "false"));
}

#[test]
fn degree_check_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"command": "degree-check", "degree": {"maps": ["identity", "reflection", "antipodal", "constant", "refsym-synthetic"], "level": 2}}"#;
    let (code, out) = robin3(dir.path(), config, &["--seed", "5"]);
    assert_eq!(code, 0);
    let csv = out.join("degree-check.csv");
    assert_eq!(column(&csv, "degree"), ["1", "-1", "1", "0", "1"]);
    let report: Value = serde_json::from_slice(&std::fs::read(out.join("degree-check.json")).unwrap()).unwrap();
    let first = &report["rows"][0]["record"];
    assert_eq!(first["map_id"], "identity");
    assert_eq!(first["agreed"], true);
    assert_eq!(first["regular_value"].as_array().unwrap().len(), 4);
    assert_eq!(report["config"]["seed"], 5);
}

#[test]
fn unknown_map_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = robin3(dir.path(), r#"{"command": "degree-check", "degree": {"maps": ["hopf"], "level": 1}}"#, &[]);
    assert_eq!(code, 2);
}

#[test]
fn find_trial_orthogonal_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = robin3(dir.path(), r#"{"command": "find-trial", "beta_grid": [0.5], "domains": [{"coeffs": [[0, 0], [0.1, 0]]}]}"#, &[]);
    assert_eq!(code, 0);
    let csv = out.join("find-trial.csv");
    assert!(num(&column(&csv, "trial_residual")[0]) < 1e-7);
    assert!(num(&column(&csv, "trial_orthogonality")[0]) < 1e-6);
    assert!(num(&column(&csv, "rayleigh")[0]) >= num(&column(&csv, "lambda3")[0]) - 1e-6);
}
