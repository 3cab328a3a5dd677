//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines reach the `cargo test` output.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use warpineq::geom::{
    builtin_models, check_cr_structure, check_dt_minimality, check_theorem_4_2,
    check_xi_relations, sample_grid, GeomConfig,
};
use warpineq::ineq::{run_audit, t010_sides, t0_sides, AuditOptions, Interpretation};
use warpineq::linalg::Matrix;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn audit_bin(dir: &Path, args: &[&str]) -> Result<i32, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_audit"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    o.status.code().ok_or_else(|| "audit killed by signal".into())
}

/// Report text with the timestamp line removed.
fn stable_bytes(path: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"started_unix_seconds\""))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn harmonic_sweep() -> Outcome {
    let (r, dt) = timed(|| run_audit("harmonic", 2..=1_000_000, 1, 42, 0.0, &AuditOptions::default()));
    let r = r.map_err(|e| e.to_string())?;
    ensure(r.trials == 999_999, || format!("swept {} values", r.trials))?;
    ensure(r.passed(), || format!("{} violations", r.violations.len()))?;
    let min = r.min_margin.unwrap_or(f64::NAN);
    ensure(min > 0.0, || format!("strict bounds need positive margins, min {min:e}"))?;
    ensure(dt < Duration::from_secs(5), || format!("took {dt:?}"))?;
    Ok(format!("v = 2..10^6, min margin {min:.3e}, {:.2?}", dt))
}

fn chain_sweep() -> Outcome {
    let (r, dt) = timed(|| run_audit("chain", 2..=10_000, 1, 42, 1e-9, &AuditOptions::default()));
    let r = r.map_err(|e| e.to_string())?;
    ensure(r.passed() && r.trials == 9_999, || format!("{} violations over {}", r.violations.len(), r.trials))?;
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("v = 2..10^4, min margin {:.3e}, {:.2?}", r.min_margin.unwrap(), dt))
}

fn power_sum_contraction() -> Outcome {
    let r = run_audit("t010", 2..=8, 1000, 42, 1e-9, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.passed() && r.trials == 7000, || format!("{} violations", r.violations.len()))?;
    let s = t010_sides(&Matrix::from_diag(&[0.1, 0.2])).map_err(|e| e.to_string())?;
    ensure((s.lhs - 0.2808128).abs() < 1e-6, || format!("spot lhs {}", s.lhs))?;
    // Exact evaluation of the bound; see the decisions ledger.
    ensure((s.rhs - 1.5008103).abs() < 1e-6, || format!("spot rhs {}", s.rhs))?;
    Ok(format!("7000 trials clean; spot lhs {:.7}, rhs {:.7}", s.lhs, s.rhs))
}

fn doubly_stochastic() -> Outcome {
    let r = run_audit("c1", 2..=8, 1000, 42, 1e-9, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.passed() && r.trials == 7000, || format!("{} violations", r.violations.len()))?;
    let max = r.observations.get("max_hs_norm").copied().unwrap_or(0.0);
    ensure(max > 1.0, || format!("max observed HS norm {max}"))?;
    Ok(format!("7000 trials clean; max observed HS norm {max:.4} > 1"))
}

fn weighted_harmonic() -> Outcome {
    let r = run_audit("weighted_harmonic", 2..=16, 6667, 42, 1e-9, &AuditOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.trials >= 100_000, || format!("only {} weight vectors", r.trials))?;
    for side in ["lower_statement", "upper"] {
        let s = r.side(side).ok_or("missing side")?;
        ensure(s.violations == 0, || format!("{side}: {} violations", s.violations))?;
    }
    let proof = r.side("lower_proof").ok_or("missing proof side")?;
    Ok(format!(
        "{} weight vectors; statement bounds clean; proof-bound violations {}",
        r.trials, proof.violations
    ))
}

fn t0_table(dir: &Path) -> Outcome {
    let args = |out: &'static str| {
        vec!["matrix-audit", "--check", "t0", "--interpretation", "all", "--dims", "2..6", "--trials", "300", "--out", out]
    };
    let c1 = audit_bin(dir, &args("t0a/report.json"))?;
    let c2 = audit_bin(dir, &args("t0b/report.json"))?;
    let a = stable_bytes(&dir.join("t0a/report.json"))?;
    let b = stable_bytes(&dir.join("t0b/report.json"))?;
    ensure(c1 == c2, || format!("exit codes {c1} vs {c2}"))?;
    // Artifact paths differ only in the output directory.
    ensure(a.replace("t0a", "t0b") == b, || "verdict tables differ".into())?;

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("t0a/report.json")).unwrap()).unwrap();
    let rows = report["results"].as_array().ok_or("no results")?;
    ensure(rows.len() == 6, || format!("{} table rows", rows.len()))?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r["holds"] == false)
        .map(|r| format!("{}/{}", r["interpretation"].as_str().unwrap(), r["side"].as_str().unwrap()))
        .collect();
    // Every failed side has persisted instances (capped per side), and each
    // persisted instance replays to the same failure.
    let violations = report["violations"].as_array().ok_or("no violations array")?;
    for r in rows.iter().filter(|r| r["holds"] == false) {
        let persisted = violations.iter().any(|v| {
            v["interpretation"] == r["interpretation"] && v["side"] == r["side"] && v["artifact"].is_string()
        });
        ensure(persisted, || format!("{}/{} has no persisted instance", r["interpretation"], r["side"]))?;
    }
    for v in violations.iter().filter(|v| v["artifact"].is_string()) {
        let path = v["artifact"].as_str().unwrap();
        let interp = v["interpretation"].as_str().unwrap();
        let code = audit_bin(dir, &["verify-file", path, "--check", "t0", "--interpretation", interp])?;
        ensure(code == 2, || format!("replay of {path} exited {code}"))?;
    }

    let x = Matrix::identity(2);
    let a = Matrix::identity(2).scale(2.25);
    let spot = t0_sides(&x, &a, Interpretation::FloorT1).map_err(|e| e.to_string())?;
    ensure(spot.margins().iter().any(|&m| m < 0.0), || format!("spot margins {:?}", spot.margins()))?;
    Ok(format!(
        "3 interpretations deterministic; failing sides [{}]; artifacts replay; X=I2, A=2.25*I2 fails under floor_t1",
        failed.join(", ")
    ))
}

fn background_facts() -> Outcome {
    let mut parts = Vec::new();
    for name in ["kyfan", "weyl", "submult", "pm_order", "anticommutator"] {
        let r = run_audit(name, 2..=8, 1000, 42, 1e-9, &AuditOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.passed() && r.trials == 7000, || format!("{name}: {} violations", r.violations.len()))?;
        parts.push(name);
    }
    Ok(format!("{} clean over 7000 trials each", parts.join(", ")))
}

fn geometry() -> Outcome {
    let cfg = GeomConfig::default();
    let start = Instant::now();
    let mut notes = Vec::new();
    for m in builtin_models() {
        let pts = sample_grid(&m, &[5], &cfg).map_err(|e| e.to_string())?;
        let cr = check_cr_structure(&m, &pts, &cfg).map_err(|e| e.to_string())?;
        ensure(cr.max() < 1e-7, || format!("{}: structure residual {:e}", m.name, cr.max()))?;
        let dt = check_dt_minimality(&m, &pts, &cfg).map_err(|e| e.to_string())?;
        ensure(dt < 1e-6, || format!("{}: D_T trace {dt:e}", m.name))?;
        let xi = check_xi_relations(&m, &pts, &cfg).map_err(|e| e.to_string())?;
        ensure(xi.h_xi_xi_max < 1e-8, || format!("{}: h(xi,xi) {:e}", m.name, xi.h_xi_xi_max))?;
        let rep = check_theorem_4_2(&m, &pts, &cfg).map_err(|e| e.to_string())?;
        ensure(rep.min_margin >= -1e-6, || format!("{}: min margin {:e}", m.name, rep.min_margin))?;
        match m.name.as_str() {
            "flat-product" => ensure(rep.equality, || "flat-product not equality".into())?,
            "chen-cone" => {
                ensure(rep.equality, || format!("chen-cone max |margin| {:e}", rep.max_abs_margin))?;
                for r in &rep.records {
                    let two_over_r2 = 2.0 / (r.point[0].powi(2) + r.point[1].powi(2));
                    ensure((r.h_sq - two_over_r2).abs() < 1e-6 && (r.rhs - two_over_r2).abs() < 1e-6, || {
                        format!("chen-cone at {:?}: {} vs {} vs 2/r^2 {}", r.point, r.h_sq, r.rhs, two_over_r2)
                    })?;
                }
            }
            _ => {
                let off = rep.records.iter().map(|r| (r.margin - 1.0).abs()).fold(0.0, f64::max);
                ensure(off < 1e-6, || format!("circle-fiber margin off 1 by {off:e}"))?;
            }
        }
        notes.push(format!("{} {}", m.name, if rep.equality { "equality" } else { "strict" }));
    }
    let dt = start.elapsed();
    ensure(dt < Duration::from_secs(30), || format!("took {dt:?}"))?;
    Ok(format!("{} on 5^4 grids, {:.2?}", notes.join(", "), dt))
}

fn determinism(dir: &Path) -> Outcome {
    let runs: [&[&str]; 4] = [
        &["matrix-audit", "--check", "submult", "--trials", "200", "--seed", "7"],
        &["matrix-audit", "--check", "c1", "--trials", "200", "--seed", "7", "--format", "csv"],
        &["sweep", "--check", "chain", "--dims", "2..2000"],
        &["geometry", "--model", "chen-cone", "--grid", "3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let out = format!("det/{i}.out");
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--out", &out]);
            // The output path is echoed in the report; run both copies under
            // the same name.
            let code = audit_bin(dir, &full)?;
            let final_path = dir.join(format!("det/{i}_{rep}.kept"));
            std::fs::rename(dir.join(&out), &final_path).map_err(|e| e.to_string())?;
            texts.push((code, stable_bytes(&final_path)?));
        }
        ensure(texts[0] == texts[1], || format!("run {:?} not reproducible", args))?;
    }
    Ok("4 configurations byte-identical apart from the timestamp".into())
}

fn main() {
    let dir = tempfile::tempdir().expect("scratch dir");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("harmonic sweep", Box::new(harmonic_sweep)),
        ("sqrt-sum chain sweep", Box::new(chain_sweep)),
        ("power sums of HS contractions", Box::new(power_sum_contraction)),
        ("power sums of doubly stochastic matrices", Box::new(doubly_stochastic)),
        ("weighted harmonic bounds", Box::new(weighted_harmonic)),
        ("singular-value chain verdict table", Box::new(|| t0_table(dir.path()))),
        ("background singular-value facts", Box::new(background_facts)),
        ("warped-product geometry", Box::new(geometry)),
        ("report determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
