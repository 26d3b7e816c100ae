use std::path::Path;
use std::process::{Command, Output};

use majlab::search::ViolationReport;
use serde_json::Value;

fn majlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majlab")).args(args).output().expect("spawn majlab")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_k3_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let o = majlab(&["verify", "--k", "3", "--dims", "2,3,4", "--trials", "100", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report = read_json(&out);
    assert_eq!(report["schema"], "rr-1");
    assert_eq!(report["subcommand"], "verify");
    assert_eq!(report["totals"]["fail"], 0);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for expected in ["d3_identity", "theorem_k3_margins", "certificate_k3", "trace_equality_k3", "sigma_k3", "fan_hoffman"] {
        assert!(names.contains(&expected), "missing check {expected}");
    }
    assert!(!names.contains(&"theorem_k4_margins"));
}

#[test]
fn malformed_dims_is_a_usage_error() {
    for dims in ["2,x", "0", ""] {
        let o = majlab(&["verify", "--dims", dims]);
        assert_eq!(o.status.code(), Some(2), "dims {dims:?}");
    }
    assert_eq!(majlab(&["prove", "--k", "6"]).status.code(), Some(2));
    assert_eq!(majlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn zero_trials_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let o = majlab(&["--quiet", "verify", "--trials", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let report = read_json(&out);
    assert_eq!(report["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn prove_prints_zero_diff() {
    for k in ["3", "4"] {
        let o = majlab(&["prove", "--k", k]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8_lossy(&o.stdout).contains("diff: 0"));
    }
}

#[test]
fn trotter_outputs_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = majlab(&["trotter", "--nmax", "2", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,error");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,") && lines[2].starts_with("2,"));

    assert_eq!(majlab(&["trotter", "--nmax", "6"]).status.code(), Some(2));
    assert_eq!(majlab(&["trotter", "--commuting", "--nmax", "64"]).status.code(), Some(0));
}

#[test]
fn hunt_report_is_reproducible_and_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    let trace = dir.path().join("trace.csv");
    for p in [&p1, &p2] {
        let o = majlab(&[
            "hunt", "--k", "4", "--dim", "3", "--restarts", "8", "--steps", "3", "--seed", "11",
            "--trace-csv", trace.to_str().unwrap(), "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut a = ViolationReport::read(&p1).unwrap();
    let mut b = ViolationReport::read(&p2).unwrap();
    a.wall_clock_secs = 0.0;
    b.wall_clock_secs = 0.0;
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.schema, "vr-1");
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("restart,step,margin\n"));

    let o = majlab(&["reverify", "--report", p1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn tampered_report_fails_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let o = majlab(&["hunt", "--k", "3", "--dim", "2", "--restarts", "4", "--steps", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut report = ViolationReport::read(&p).unwrap();
    report.best_margin -= 0.5;
    report.margins[0] -= 0.5;
    report.write(&p).unwrap();
    assert_eq!(majlab(&["reverify", "--report", p.to_str().unwrap()]).status.code(), Some(1));

    std::fs::write(&p, "{\"schema\": \"vr-1\"").unwrap();
    assert_eq!(majlab(&["reverify", "--report", p.to_str().unwrap()]).status.code(), Some(2));
}
