use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_finsler-iso"));
    c.env_remove("FINSLER_ISO_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("valid schema")
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = schema().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}");
}

const SQUARE: &str = r#"{"kind": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]]}"#;
const L_SHAPE: &str = r#"{"kind": "polygon", "vertices": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#;

#[test]
fn profile_at_half_volume() {
    let v = json(&["profile", "--N", "3", "--D", "2", "--v", "0.5"]);
    let row = &v["result"]["rows"][0];
    assert_eq!(row["argmin_xi"], "inf");
    assert!((row["profile"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert_eq!(v["command"], "profile");
    assert_valid(&v);
}

#[test]
fn profile_range_csv_has_seventeen_digits() {
    let out = run(&["--format", "csv", "profile", "--N", "2", "--D", "1", "--v-range", "0.1:0.4:4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "v,profile,argmin_xi");
    assert_eq!(lines.len(), 5);
    let first = lines[1].split(',').next().unwrap();
    assert_eq!(first, "1.0000000000000001e-1");
}

#[test]
fn bad_range_is_an_error() {
    let out = run(&["profile", "--N", "2", "--D", "1", "--v-range", "0.4:0.1:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("v-range"));
}

#[test]
fn cone_reports() {
    let wulff = json(&["--resolution", "1024", "cone-report", "--shape", r#"{"kind": "wulff", "gauge": {"kind": "euclidean", "dim": 2}}"#]);
    assert!((wulff["result"]["Q_extrapolated"].as_f64().unwrap() - 1.0).abs() <= 1e-6);
    assert_valid(&wulff);

    let ellipse = json(&["--resolution", "2048", "cone-report", "--shape", r#"{"kind": "ellipse", "semi_axes": [2, 1]}"#]);
    // perimeter of the (2, 1) ellipse is 9.688448220547676; Q = P / (2 √(π · 2π))
    let q = 9.688448220547676 / (2.0 * (2.0 * std::f64::consts::PI * std::f64::consts::PI).sqrt());
    assert!((ellipse["result"]["Q_extrapolated"].as_f64().unwrap() - q).abs() <= 1e-5);

    let randers = json(&[
        "--resolution",
        "512",
        "cone-report",
        "--shape",
        SQUARE,
        "--gauge",
        r#"{"kind": "randers", "drift": [0.5, 0]}"#,
    ]);
    // H is the dual of the Randers gauge with drift 1/2, so H* has Λ = 3
    assert!((randers["result"]["lambda_F"].as_f64().unwrap() - 3.0).abs() <= 1e-9);
}

#[test]
fn verify_wulff_passes() {
    let v = json(&["--seed", "7", "verify", "--suite", "wulff"]);
    assert_valid(&v);
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 6);
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn unknown_suite_fails() {
    let out = run(&["verify", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["--seed", "11", "verify", "--suite", "profiles"];
    let a = run(&args);
    let b = bin().args(args).env("FINSLER_ISO_THREADS", "1").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--format", "csv", "--resolution", "256", "mink-content", "--shape", L_SHAPE]);
    let d = run(&["--format", "csv", "--resolution", "256", "mink-content", "--shape", L_SHAPE]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn every_command_matches_the_schema() {
    let reports = [
        json(&["residual", "--density", r#"{"N": 3, "model": {"xi": 0.5, "D": 1}}"#, "--set", "[[0, 0.3]]"]),
        json(&["--resolution", "256", "gauge-info", "--gauge", r#"{"kind": "custom", "family": {"name": "lp", "dim": 2, "p": 3}}"#]),
        json(&["--resolution", "64", "wulff", "--gauge", r#"{"kind": "polytopal", "vertices": [[1,0],[0,1],[-1,0],[0,-1]]}"#]),
        json(&["--resolution", "256", "bm-check", "--a", SQUARE, "--b", r#"{"kind": "ball", "center": [3, 0], "radius": 1}"#, "--t", "0.3"]),
        json(&["--resolution", "256", "bm-check", "--a", SQUARE, "--radii", "10,40", "--t", "0.001"]),
        json(&["--resolution", "256", "mink-content", "--shape", SQUARE]),
        json(&["--resolution", "256", "mink-content", "--shape", L_SHAPE]),
        json(&["--resolution", "256", "coarea", "--grid", "100"]),
    ];
    for r in &reports {
        assert_valid(r);
    }
    // L-shape: content equals the perimeter 8
    assert!((reports[6]["result"]["extrapolated"].as_f64().unwrap() - 8.0).abs() <= 1e-3);
    // square: P + ε m(B) is linear in ε, so the extrapolation is exact
    assert!((reports[5]["result"]["extrapolated"].as_f64().unwrap() - 4.0).abs() <= 1e-9);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"format": "csv", "out": {:?}, "commands": {{"profile": {{"N": 2, "D": 1, "v": [0.25, 0.5]}}}}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let status = run(&["--config", cfg.to_str().unwrap(), "profile", "--v", "0.5"]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    // flag overrides the section's volumes
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("inf"));
}

#[test]
fn missing_parameter_is_reported() {
    let out = run(&["profile", "--N", "2", "--v", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--D"));
}
