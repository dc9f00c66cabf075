use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn pswedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pswedge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_case() -> Value {
    json!({
        "k": 5.0 * PI,
        "s": 0.1,
        "a": 0.01,
        "alpha": 5.0 * PI / 6.0,
        "theta_inc": 0.0,
        "M": 120,
        "j_max": 20,
        "oracle_n": 10,
        "grid": { "x0": -0.5, "x1": 0.5, "y0": -0.5, "y1": 0.5, "nx": 21, "ny": 21 }
    })
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr has a report");
    serde_json::from_str(line).expect("stderr report is JSON")
}

#[test]
fn resonant_wedge_exits_with_resonance_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({ "k": 2.0 * PI, "s": 1.0, "a": 0.01, "alpha": PI / 2.0, "theta_inc": PI / 2.0, "M": 50 });
    let path = write_config(dir.path(), "resonant.json", &cfg);
    let out_dir = dir.path().join("out");
    let out = pswedge(&["--config", &path, "--out", out_dir.to_str().unwrap(), "wedge"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stderr_json(&out);
    assert_eq!(report["error"], "resonance");
    assert_eq!(report["exit_code"], 1);
    assert!(!report["details"]["hits"].as_array().unwrap().is_empty());
    assert!(!out_dir.join("wedge_coeffs.csv").exists());
}

#[test]
fn resonance_override_runs_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({ "k": 2.0 * PI, "s": 1.0, "a": 0.01, "alpha": PI / 2.0, "theta_inc": PI / 2.0, "M": 50 });
    let path = write_config(dir.path(), "resonant.json", &cfg);
    let out_dir = dir.path().join("out");
    let out = pswedge(&["--config", &path, "--out", out_dir.to_str().unwrap(), "--allow-resonant", "semi"]);
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("warning"), "{text}");
    assert!(out.status.success(), "{text}");
    assert!(out_dir.join("semi.json").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "case.json", &small_case());
    let mut files = Vec::new();
    for run in ["one", "two"] {
        let out_dir = dir.path().join(run);
        let out = pswedge(&["--config", &path, "--out", out_dir.to_str().unwrap(), "field"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(out_dir.join("field.csv"));
    }
    assert_eq!(fs::read(&files[0]).unwrap(), fs::read(&files[1]).unwrap());

    let cmp_dir = dir.path().join("cmp");
    let out = pswedge(&[
        "--out",
        cmp_dir.to_str().unwrap(),
        "compare",
        "--a",
        files[0].to_str().unwrap(),
        "--b",
        files[1].to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["rel_l2"], 0.0);
    assert_eq!(summary["max_abs"], 0.0);
}

#[test]
fn sidecar_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "case.json", &small_case());
    let first = dir.path().join("first");
    let out = pswedge(&["--config", &path, "--out", first.to_str().unwrap(), "--seed", "7", "wedge"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar = first.join("wedge.json");
    let meta: Value = serde_json::from_str(&fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert_eq!(meta["config"]["aaa"]["seed"], 7);
    assert!(meta["rhoAB"].as_f64().unwrap() < 1.0);

    let second = dir.path().join("second");
    let out = pswedge(&["--config", sidecar.to_str().unwrap(), "--out", second.to_str().unwrap(), "wedge"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["wedge_coeffs.csv", "wedge_history.csv", "wedge.json"] {
        assert_eq!(fs::read(first.join(name)).unwrap(), fs::read(second.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn scheme_matches_oracle_through_compare() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "case.json", &small_case());
    let out_dir = dir.path().join("out");
    let out = pswedge(&["--config", &path, "--out", out_dir.to_str().unwrap(), "compare"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["rel_l2"].as_f64().unwrap().is_finite());
    assert!(out_dir.join("scheme_field.csv").exists());
    assert!(out_dir.join("oracle_field.csv").exists());
}

#[test]
fn invalid_configurations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.json", json!({ "k": 1.0 })),
        ("unknown.json", json!({ "k": 1.0, "s": 1.0, "a": 0.01, "alpha": 1.0, "theta_inc": 0.0, "bogus": 1 })),
        ("geometry.json", json!({ "k": 1.0, "s": 1.0, "a": 0.6, "alpha": 1.0, "theta_inc": 0.0 })),
        ("negative.json", json!({ "k": -1.0, "s": 1.0, "a": 0.01, "alpha": 1.0, "theta_inc": 0.0 })),
        ("truncation.json", json!({ "k": 1.0, "s": 1.0, "a": 0.01, "alpha": 1.0, "theta_inc": 0.0, "M": 0 })),
    ];
    for (name, cfg) in cases {
        let path = write_config(dir.path(), name, &cfg);
        let out = pswedge(&["--config", &path, "--out", dir.path().to_str().unwrap(), "lambda"]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        let report = stderr_json(&out);
        assert_eq!(report["exit_code"], 1, "{name}");
    }
}

#[test]
fn missing_config_and_empty_field_file_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = pswedge(&["--out", dir.path().to_str().unwrap(), "kernel"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "config");

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "x,y,re,im,masked\n").unwrap();
    let e = empty.to_str().unwrap();
    let out = pswedge(&["--out", dir.path().to_str().unwrap(), "compare", "--a", e, "--b", e]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "shape");
}

#[test]
fn kernel_samples_have_requested_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({ "k": 1.0, "s": 1.0, "a": 0.01, "alpha": PI / 2.0, "theta_inc": 0.0, "kernel_samples": 64 });
    let path = write_config(dir.path(), "kernel.json", &cfg);
    let out = pswedge(&["--config", &path, "--out", dir.path().to_str().unwrap(), "kernel"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("kernel.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re,im"));
    assert_eq!(lines.count(), 64);
}

#[test]
fn usage_errors_exit_one_with_json() {
    let out = pswedge(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stderr_json(&out);
    assert_eq!(report["error"], "usage");
    assert_eq!(report["exit_code"], 1);
}
