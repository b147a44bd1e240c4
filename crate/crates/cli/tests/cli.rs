use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rumor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rumor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("job.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const TINY: &str = r#"{
  "population": {"n_total": 300},
  "ensemble": {"n_populations": 2, "runs_per_population": 3, "iterations": 60},
  "grid": {"p_ii": [0.05], "p_ip": [0.05], "p_usg": [0.0]}
}"#;

#[test]
fn validate_tables_passes() {
    let out = rumor(&["validate-tables"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 25);
    assert!(v["manifest"]["config"].is_object());
}

#[test]
fn predict_worked_point() {
    let out = rumor(&["predict", "--p-ii", "0.02", "--p-ip", "0.01", "--p-usg", "0"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    let row = &v["predictions"][0]["table"][4];
    assert_eq!(row["x"], 0.5);
    let t50 = row["t_x"].as_f64().unwrap();
    assert!((t50 - 54.9).abs() < 1.0, "{t50}");
}

#[test]
fn predict_omits_rows_below_seed() {
    let out = rumor(&["predict", "--p-ii", "0.15", "--p-ip", "0.05"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    let first = &v["predictions"][0]["table"][0];
    assert!(first["t_x"].is_null());
    assert!(first["omitted"].as_str().unwrap().contains("below"));
    // p_ii above the fitted range is flagged
    assert!(!v["predictions"][0]["prediction"]["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn predict_t50_falls_with_usg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"grid": {"p_ii": [0.02], "p_ip": [0.01], "p_usg": [0.0, 0.03, 0.05, 0.07, 0.1]}}"#,
    );
    let out = rumor(&["predict", "--config", &cfg]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    let t50: Vec<f64> = v["predictions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["table"][4]["t_x"].as_f64().unwrap())
        .collect();
    assert_eq!(t50.len(), 5);
    assert!(t50.windows(2).all(|w| w[1] < w[0]), "{t50:?}");
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn sweep_single_point_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), TINY);
    let dir = tmp.path().join("out");
    let mut snapshots = Vec::new();
    for jobs in ["1", "4"] {
        let out = rumor(&["sweep", "--config", &cfg, "--seed", "5", "--out", dir.to_str().unwrap(), "--jobs", jobs]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        snapshots.push(read_all(&dir));
    }
    let files = &snapshots[0];
    let names: Vec<&str> = files.iter().map(|f| f.0.as_str()).collect();
    assert_eq!(names, ["manifest.json", "point_000.csv", "summary.json"]);
    assert!(snapshots[0] == snapshots[1], "reruns differ");

    let csv = String::from_utf8(files[1].1.clone()).unwrap();
    assert!(csv.starts_with("n,f_mean,f_std,n_samples\n"));
    assert_eq!(csv.lines().count(), 62);
    let summary = json(&files[2].1);
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["manifest"]["master_seed"], 5);
    assert_eq!(summary["n_points"], 1);
    assert!(summary["points"][0]["fit"]["r_squared"].as_f64().unwrap() > 0.9);
}

#[test]
fn config_command_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"command": "sweep"}"#);
    let out = rumor(&["predict", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_point_sets_exit_status() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &TINY.replace(r#""p_ip": [0.05]"#, r#""p_ip": [0.0, 0.05]"#),
    );
    let out_dir = tmp.path().join("out");
    let out = rumor(&["sweep", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let summary = json(&fs::read(out_dir.join("summary.json")).unwrap());
    assert_eq!(summary["n_points"], 2);
    assert_eq!(summary["n_failed"], 1);
    assert!(summary["points"][0]["error"].as_str().unwrap().contains("no growth"));
    assert!(summary["points"][1]["error"].is_null());
}

#[test]
fn simulate_then_fit_and_infer() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), TINY);
    let out_dir = tmp.path().join("sim");
    let out = rumor(&["simulate", "--config", &cfg, "--p-ii", "0.05", "--p-ip", "0.05", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = out_dir.join("series.csv");
    let summary = json(&fs::read(out_dir.join("summary.json")).unwrap());

    let fit = rumor(&["fit", "--input", csv.to_str().unwrap()]);
    assert!(fit.status.success());
    let v = json(&fit.stdout);
    assert_eq!(v["fit"]["coefficients"], summary["fit"]["coefficients"]);

    let inf = rumor(&["infer", "--input", csv.to_str().unwrap()]);
    assert!(inf.status.success(), "{}", String::from_utf8_lossy(&inf.stderr));
    let v = json(&inf.stdout);
    assert!(v["p_ip"].as_f64().unwrap() > 0.0);
    assert!(v["diagnostics"]["usg_status"].is_string());
}

#[test]
fn fit_rejects_flat_series() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("flat.csv");
    let mut text = String::from("n,f_mean,f_std,n_samples\n");
    for n in 0..10 {
        text.push_str(&format!("{n},0.1,0,5\n"));
    }
    fs::write(&csv, text).unwrap();
    let out = rumor(&["fit", "--input", csv.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no growth"));
}

#[test]
fn gen_pop_writes_network() {
    let tmp = tempfile::tempdir().unwrap();
    let out = rumor(&["gen-pop", "--profile", "desk", "--seed", "3", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let net = json(&fs::read(tmp.path().join("network.json")).unwrap());
    assert_eq!(net["n_total"], 2000);
    assert_eq!(net["connected"].as_array().unwrap().len(), 1400);
    let report = json(&fs::read(tmp.path().join("gen-pop.json")).unwrap());
    assert_eq!(report["manifest"]["config"]["population"]["n_total"], 2000);
    assert_eq!(report["n_connected"], 1400);
}
