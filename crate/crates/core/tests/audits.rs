use warpineq::ineq::{registry_names, run_audit, t0_verdict_table, AuditOptions};
use warpineq::linalg::Matrix;

#[test]
fn every_random_check_is_clean_on_a_small_run() {
    let opts = AuditOptions::default();
    for name in registry_names() {
        if ["harmonic", "chain", "t0"].contains(&name) {
            continue;
        }
        let r = run_audit(name, 2..=5, 40, 7, 1e-9, &opts).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.violations.first());
        assert_eq!(r.trials, 160);
    }
}

#[test]
fn reports_are_reproducible() {
    let opts = AuditOptions::default();
    let a = run_audit("c1", 2..=4, 25, 99, 1e-9, &opts).unwrap();
    let b = run_audit("c1", 2..=4, 25, 99, 1e-9, &opts).unwrap();
    assert_eq!(a, b);
    let c = run_audit("c1", 2..=4, 25, 100, 1e-9, &opts).unwrap();
    assert_ne!(a.min_margin, c.min_margin);
}

#[test]
fn t0_artifacts_reload() {
    let dir = tempfile::tempdir().unwrap();
    let opts = AuditOptions {
        artifact_dir: Some(dir.path().to_path_buf()),
        ..AuditOptions::default()
    };
    let (rows, reports) = t0_verdict_table(2..=4, 30, 42, 1e-9, &opts).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(!rows.is_empty());
    for v in reports.iter().flat_map(|r| &r.violations) {
        let path = v.artifact_path.as_ref().expect("persisted");
        let m = Matrix::from_text(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(m.rows(), 2 * m.cols());
    }
}

#[test]
fn zero_trials_give_an_empty_report() {
    let r = run_audit("t010", 2..=8, 0, 42, 1e-9, &AuditOptions::default()).unwrap();
    assert_eq!(r.trials, 0);
    assert!(r.min_margin_undefined() && r.passed());
}
