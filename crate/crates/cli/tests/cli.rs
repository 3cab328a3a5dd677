use std::path::Path;
use std::process::{Command, Output};

fn audit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_audit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn audit")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn t010_audit_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["matrix-audit", "--check", "t010", "--dims", "2..8", "--trials", "200", "--seed", "42", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["summary"]["verdict"], "pass");
    assert_eq!(r["summary"]["trials"], 1400);
    assert_eq!(r["results"].as_array().unwrap().len(), 7);
    for key in ["tool_version", "config_echo", "check_name", "started_unix_seconds", "results", "violations", "summary"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn t0_dim_reading_fails_with_persisted_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["matrix-audit", "--check", "t0", "--interpretation", "dim", "--trials", "100", "--out", "runs/t0.json"]);
    assert_eq!(code(&o), 2);
    let r = json(&dir.path().join("runs/t0.json"));
    let v = &r["violations"][0];
    let artifact = v["artifact"].as_str().expect("artifact path");
    assert!(artifact.starts_with("runs"), "{artifact}");
    // Replaying the persisted instance reproduces the failure.
    let replay = audit(dir.path(), &["verify-file", artifact, "--check", "t0", "--interpretation", "dim"]);
    assert_eq!(code(&replay), 2);
}

#[test]
fn zero_trials_yield_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["matrix-audit", "--check", "c1", "--trials", "0"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["summary"]["trials"], 0);
    assert!(r["summary"]["min_margin"].is_null());
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["matrix-audit", "--check", "nope"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("kyfan"));
    assert_eq!(code(&audit(dir.path(), &["matrix-audit"])), 1);
    assert_eq!(code(&audit(dir.path(), &["matrix-audit", "--check", "t010", "--dims", "1..3"])), 1);
    assert_eq!(code(&audit(dir.path(), &["matrix-audit", "--check", "t010", "--trials", "-3"])), 1);
    assert_eq!(code(&audit(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&audit(dir.path(), &["--help"])), 0);
    assert_eq!(code(&audit(dir.path(), &["sweep", "--check", "t010"])), 1);
}

#[test]
fn geometry_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for (model, grid, verdict) in [("chen-cone", "3", "equality"), ("circle-fiber", "3", "strict"), ("flat-product", "3", "equality")] {
        let o = audit(dir.path(), &["geometry", "--model", model, "--grid", grid]);
        assert_eq!(code(&o), 0, "{model}: {}", String::from_utf8_lossy(&o.stderr));
        let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(r["summary"]["verdict"], verdict, "{model}");
        assert_eq!(r["results"].as_array().unwrap().len(), 81);
    }
    assert_eq!(code(&audit(dir.path(), &["geometry", "--model", "torus"])), 1);
    // The control breaks the structure hypotheses: an error, not a violation.
    assert_eq!(code(&audit(dir.path(), &["geometry", "--model", "holomorphic-fiber", "--grid", "2"])), 1);
}

#[test]
fn geometry_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["geometry", "--model", "circle-fiber", "--grid", "2,1,1,3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,z,t,h_sq,grad_lnf_sq,lap_lnf,rhs,margin"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn verify_file_contract() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("id.mat"), "2 2\n1 0\n0 1\n").unwrap();
    std::fs::write(p.join("nan.mat"), "2 2\n1 NaN\n0 1\n").unwrap();
    std::fs::write(p.join("one.mat"), "1 1\n0.5\n").unwrap();
    std::fs::write(p.join("short.mat"), "2 2\n1 0\n0\n").unwrap();
    assert_eq!(code(&audit(p, &["verify-file", "id.mat", "--check", "c1"])), 0);
    let nan = audit(p, &["verify-file", "nan.mat", "--check", "c1"]);
    assert_eq!(code(&nan), 1);
    assert!(String::from_utf8_lossy(&nan.stderr).contains("line 2"));
    assert_eq!(code(&audit(p, &["verify-file", "one.mat", "--check", "t010"])), 1);
    let short = audit(p, &["verify-file", "short.mat", "--check", "c1"]);
    assert_eq!(code(&short), 1);
    assert!(String::from_utf8_lossy(&short.stderr).contains("line 3"));
    assert_eq!(code(&audit(p, &["verify-file", "missing.mat", "--check", "c1"])), 1);
    assert_eq!(code(&audit(p, &["verify-file", "id.mat", "--check", "weyl"])), 1);
}

#[test]
fn sweep_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = audit(dir.path(), &["sweep", "--check", "chain", "--dims", "2..500", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("side,asserted,min_margin,violations"));
}
