use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn mixspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixspec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn column(report: &Value, name: &str) -> Vec<Value> {
    report["rows"].as_array().unwrap().iter().map(|r| r[name].clone()).collect()
}

fn floats(report: &Value, name: &str) -> Vec<f64> {
    column(report, name).iter().map(|v| v.as_f64().unwrap()).collect()
}

#[test]
fn square_nd_spectrum() {
    let out = mixspec(&["spectrum", "--domain", "square-mixed", "--problem", "nd", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema_version"], 1);
    let values = floats(&r, "value");
    for (v, c) in values.iter().zip([1.0, 2.0, 4.0]) {
        assert!((v - c * PI * PI).abs() <= 1e-15 * v);
    }
    assert!(column(&r, "provenance").iter().all(|p| p == "closed_form"));
    assert!(column(&r, "tol").iter().all(|t| t.is_number()));
}

#[test]
fn half_disk_steklov_is_k() {
    let out = mixspec(&["spectrum", "--domain", "half-disk", "--problem", "sd", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(floats(&json(&out), "value"), vec![1.0, 2.0, 3.0]);
}

#[test]
fn unknown_problem_is_input_error() {
    let out = mixspec(&["spectrum", "--domain", "square-mixed", "--problem", "wave"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown problem `wave`"));
}

#[test]
fn ks_on_square_passes() {
    let out = mixspec(&["verify", "ks", "--domain", "square-mixed", "--count", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["summary"]["passed"], true);
    assert_eq!(r["summary"]["holding"], 10);
    assert_eq!(r["inputs"]["h_min"].as_f64(), Some(0.5));
}

#[test]
fn christianson_one_dirichlet_side() {
    let out = mixspec(&[
        "verify",
        "christianson",
        "--domain",
        "square-one-dirichlet-side",
        "--point",
        "0.5,0.5",
        "--count",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(floats(&r, "residual").iter().all(|&x| x < 1e-8));
    let faces = &r["rows"][0]["face_distance"];
    assert_eq!(faces.as_array().unwrap().len(), 4);
}

#[test]
fn christianson_rejects_curved_domains() {
    let out = mixspec(&["verify", "christianson", "--domain", "half-disk"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn robin_alpha_zero_rejected() {
    let out = mixspec(&["verify", "robin", "--domain", "half-disk", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = mixspec(&["verify", "robin", "--domain", "half-disk", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let theorems = column(&json(&out), "theorem");
    assert!(theorems.iter().any(|t| t == "robin_derivative"));
}

#[test]
fn failed_check_exits_one() {
    let out = mixspec(&["verify", "weyl", "--domain", "disk", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["passed"], false);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "hadamard", "--domain", "square-mixed", "--count", "2"];
    let a = mixspec(&args);
    let b = mixspec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("wall_clock"));
    let timed = mixspec(&["verify", "hadamard", "--domain", "square-mixed", "--timing"]);
    assert!(json(&timed)["wall_clock_seconds"].is_number());
}

#[test]
fn csv_round_trips_exactly() {
    let out = mixspec(&["spectrum", "--domain", "square-mixed", "--problem", "sd", "--count", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let col = headers.iter().position(|h| h == "value").unwrap();
    let values: Vec<f64> = reader.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    let expected = mixspec_core::closed_form::square_sd_spectrum(4).values();
    assert_eq!(values, expected);
}

#[test]
fn domain_file_with_fem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l_shape.json");
    std::fs::write(
        &path,
        r#"{"type":"polygon",
            "vertices":[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]],
            "conditions":["dirichlet","steklov","steklov","steklov","steklov","dirichlet"],
            "point":[0.5,0.5]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = mixspec(&["spectrum", "--domain", p, "--problem", "sd", "--method", "fem", "--h", "0.125", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let values = floats(&r, "value");
    assert!(values.windows(2).all(|w| w[0] <= w[1]) && values[0] > 0.0);
    assert!(column(&r, "provenance").iter().all(|v| v == "fem(h=0.125)"));

    // the closed form does not know the L shape
    let out = mixspec(&["spectrum", "--domain", p, "--problem", "sd"]);
    assert_eq!(out.status.code(), Some(2));

    let out_path = dir.path().join("report.json");
    let out = mixspec(&["verify", "christianson", "--domain", p, "--method", "fem", "--h", "0.125", "--count", "2",
        "--output", out_path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["inputs"]["point"], serde_json::json!([0.5, 0.5]));
}

#[test]
fn malformed_domain_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("bad_condition.json", r#"{"type":"disk","radius":1,"conditions":["sticky"]}"#),
        ("unknown_key.json", r#"{"type":"disk","radius":1,"conditions":["neumann"],"mass":3}"#),
        ("not_json.json", "disk of radius one"),
    ] {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let out = mixspec(&["spectrum", "--domain", path.to_str().unwrap(), "--problem", "nd"]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
    let out = mixspec(&["spectrum", "--domain", "/no/such/file.json", "--problem", "nd"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_dump() {
    let out = mixspec(&["mesh", "--domain", "square-mixed", "--h", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let m = json(&out);
    assert_eq!(m["vertices"].as_array().unwrap().len(), 25);
    assert_eq!(m["triangles"].as_array().unwrap().len(), 32);
    let edges = m["boundary_edges"].as_array().unwrap();
    assert_eq!(edges.len(), 16);
    assert_eq!(edges.iter().filter(|e| e["condition"] == "dirichlet").count(), 8);
    let out = mixspec(&["mesh", "--domain", "hyperbolic-disk:1", "--h", "0.25"]);
    assert_eq!(out.status.code(), Some(2));
}
