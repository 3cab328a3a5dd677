use std::fs;

use serde_json::{json, Value};
use warpineq::geom::{
    check_dt_minimality, check_theorem_4_2, check_xi_relations, model_by_name, normal_basis,
    sample_grid, shape_operator, shape_operator_chart_singular_values, GeomConfig,
};
use warpineq::ineq::{
    c1_sides, lookup, run_audit, t010_sides, t0_sides, t0_verdict_table, unstack, AuditOptions,
    AuditReport, CheckClass, Interpretation,
};
use warpineq::linalg::Matrix;

use crate::report::{num, to_value, Report, ViolationRow};
use crate::{CliError, RunConfig, EXIT_OK, EXIT_VIOLATION};

fn finish(report: &Report, cfg: &RunConfig, violated: bool) -> Result<i32, CliError> {
    report.write(cfg)?;
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn audit_options(cfg: &RunConfig, interpretation: Interpretation) -> Result<AuditOptions, CliError> {
    let dir = cfg.resolved_artifact_dir();
    fs::create_dir_all(&dir)?;
    Ok(AuditOptions {
        interpretation,
        artifact_dir: Some(dir),
        ..AuditOptions::default()
    })
}

fn violation_rows(r: &AuditReport) -> Vec<ViolationRow> {
    r.violations
        .iter()
        .map(|v| ViolationRow {
            trial: Some(v.trial_index),
            margin: v.margin,
            artifact: v.artifact_path.clone(),
            dim: Some(v.dim),
            side: v.side.clone(),
            interpretation: r.interpretation.clone(),
        })
        .collect()
}

fn verdict(violated: bool) -> &'static str {
    if violated {
        "violation"
    } else {
        "pass"
    }
}

fn audit_report(cfg: &RunConfig, r: &AuditReport) -> Report {
    let mut rep = if r.class == CheckClass::Sweep {
        let mut rep = Report::new(cfg, &r.check_name, &["side", "asserted", "min_margin", "violations"]);
        for s in &r.sides {
            rep.push_row(vec![s.name.clone().into(), s.asserted.into(), num(s.min_margin), s.violations.into()]);
        }
        rep
    } else {
        let mut rep = Report::new(cfg, &r.check_name, &["dim", "trials", "min_margin", "violations"]);
        for d in &r.per_dim {
            rep.push_row(vec![d.dim.into(), d.trials.into(), num(d.min_margin), d.violations.into()]);
        }
        rep
    };
    rep.violations = violation_rows(r);
    rep.summary.insert("sides".into(), to_value(&r.sides));
    rep.summary.insert("observations".into(), to_value(&r.observations));
    if let Some(i) = &r.interpretation {
        rep.summary.insert("interpretation".into(), i.clone().into());
    }
    rep.set_summary(r.trials, r.min_margin, verdict(!r.passed()));
    rep
}

fn t0_all(cfg: &RunConfig) -> Result<i32, CliError> {
    let opts = audit_options(cfg, Interpretation::FloorT1)?;
    let (rows, reports) = t0_verdict_table(cfg.dims.lo..=cfg.dims.hi, cfg.trials, cfg.seed, cfg.tol, &opts)?;
    let mut rep = Report::new(cfg, "t0", &["interpretation", "side", "trials", "violations", "min_margin", "holds"]);
    for r in &rows {
        rep.push_row(vec![
            r.interpretation.clone().into(),
            r.side.clone().into(),
            r.trials.into(),
            r.violations.into(),
            num(r.min_margin),
            r.holds.into(),
        ]);
    }
    rep.violations = reports.iter().flat_map(violation_rows).collect();
    let min = reports.iter().filter_map(|r| r.min_margin).reduce(f64::min);
    let trials = reports.iter().map(|r| r.trials).sum();
    let violated = !rep.violations.is_empty();
    rep.set_summary(trials, min, verdict(violated));
    finish(&rep, cfg, violated)
}

/// Random-ensemble audit of `--check`.
pub fn cmd_matrix_audit(cfg: &RunConfig) -> Result<i32, CliError> {
    let name = cfg
        .check
        .as_deref()
        .ok_or_else(|| CliError::Usage("matrix-audit needs --check".into()))?;
    let check = lookup(name)?;
    if check.name == "t0" && cfg.interpretation == "all" {
        return t0_all(cfg);
    }
    let interp: Interpretation = cfg.interpretation.parse().map_err(CliError::Audit)?;
    let opts = audit_options(cfg, interp)?;
    let r = run_audit(check.name, cfg.dims.lo..=cfg.dims.hi, cfg.trials, cfg.seed, cfg.tol, &opts)?;
    let rep = audit_report(cfg, &r);
    finish(&rep, cfg, !r.passed())
}

/// Exhaustive sweep of `harmonic` (default) or `chain` over `--dims`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<i32, CliError> {
    let name = cfg.check.as_deref().unwrap_or("harmonic");
    let check = lookup(name)?;
    if check.class != CheckClass::Sweep {
        return Err(CliError::Usage(format!("{name} is not a sweep check (use harmonic or chain)")));
    }
    let r = run_audit(check.name, cfg.dims.lo..=cfg.dims.hi, 1, cfg.seed, cfg.tol, &AuditOptions::default())?;
    let rep = audit_report(cfg, &r);
    finish(&rep, cfg, !r.passed())
}

/// Catalog immersion checked on a sample grid.
pub fn cmd_geometry(cfg: &RunConfig) -> Result<i32, CliError> {
    let name = cfg
        .model
        .as_deref()
        .ok_or_else(|| CliError::Usage("geometry needs --model".into()))?;
    let model = model_by_name(name)?;
    let gcfg = GeomConfig {
        laplacian_sign: cfg.laplacian_sign,
        geo_tol: cfg.geo_tol,
        ..GeomConfig::default()
    };
    let points = sample_grid(&model, &cfg.grid, &gcfg)?;
    let bound = check_theorem_4_2(&model, &points, &gcfg)?;
    let dt_min = check_dt_minimality(&model, &points, &gcfg)?;
    let xi = check_xi_relations(&model, &points, &gcfg)?;

    // Shape operators at the chart centre, singular values two ways.
    let center = model.chart_center();
    let mut shape = Vec::new();
    let mut disagreement = 0.0f64;
    for zeta in normal_basis(&model, &center, &gcfg)? {
        let a = shape_operator(&model, &center, &zeta, &gcfg)?;
        let direct = a.singular_values(true)?;
        let chart = shape_operator_chart_singular_values(&model, &center, &zeta, true, &gcfg)?;
        for (d, c) in direct.iter().zip(&chart) {
            disagreement = disagreement.max((d - c).abs());
        }
        shape.push(json!({ "normal": zeta, "singular_values": direct }));
    }

    let mut columns: Vec<&str> = model.chart.iter().map(|a| a.name.as_str()).collect();
    columns.extend(["h_sq", "grad_lnf_sq", "lap_lnf", "rhs", "margin"]);
    let mut rep = Report::new(cfg, &format!("geometry:{}", model.name), &columns);
    for (i, r) in bound.records.iter().enumerate() {
        let mut row: Vec<Value> = r.point.iter().map(|&x| Value::from(x)).collect();
        row.extend([r.h_sq, r.grad_lnf_sq, r.lap_lnf, r.rhs, r.margin].map(Value::from));
        rep.push_row(row);
        if r.margin < -gcfg.geo_tol {
            rep.violations.push(ViolationRow {
                trial: Some(i),
                margin: r.margin,
                artifact: None,
                dim: None,
                side: "bound".into(),
                interpretation: None,
            });
        }
    }
    for (side, value) in [("dt_minimality", dt_min), ("xi_xi", xi.h_xi_xi_max)] {
        if value > gcfg.geo_tol {
            rep.violations.push(ViolationRow {
                trial: None,
                margin: gcfg.geo_tol - value,
                artifact: None,
                dim: None,
                side: side.into(),
                interpretation: None,
            });
        }
    }

    let s = &mut rep.summary;
    s.insert("model".into(), model.name.clone().into());
    s.insert("equality".into(), bound.equality.into());
    s.insert("max_abs_margin".into(), bound.max_abs_margin.into());
    s.insert("equality_diagnostics".into(), to_value(&bound.equality_diagnostics));
    s.insert("cr_residuals".into(), to_value(&bound.cr_residuals));
    s.insert("dt_minimality_max".into(), dt_min.into());
    s.insert("h_xi_xi_max".into(), xi.h_xi_xi_max.into());
    s.insert(
        "shape_operator".into(),
        json!({ "point": center, "xi_orthogonal_block": shape, "max_route_disagreement": disagreement }),
    );
    let violated = !rep.violations.is_empty();
    let label = if violated {
        "violation"
    } else if bound.equality {
        "equality"
    } else {
        "strict"
    };
    rep.set_summary(bound.records.len(), Some(bound.min_margin), label);
    finish(&rep, cfg, violated)
}

/// Runs `t010`, `c1` or `t0` on a matrix file; `t0` takes the stacked
/// `(2v)×v` layout `[X; A]`.
pub fn cmd_verify_file(cfg: &RunConfig) -> Result<i32, CliError> {
    let path = cfg.file.as_ref().ok_or_else(|| CliError::Usage("verify-file needs a FILE".into()))?;
    let name = cfg
        .check
        .as_deref()
        .ok_or_else(|| CliError::Usage("verify-file needs --check".into()))?;
    let text = fs::read_to_string(path)?;
    let m = Matrix::from_text(&text).map_err(CliError::Format)?;
    let shown = path.display().to_string();

    let mut rep = Report::new(cfg, name, &["quantity", "value"]);
    let mut sides: Vec<(&str, f64)> = Vec::new();
    match name {
        "t010" | "c1" => {
            let s = if name == "t010" { t010_sides(&m)? } else { c1_sides(&m)? };
            for (q, v) in [("lhs", s.lhs), ("rhs", s.rhs), ("hs_norm", s.hs_norm)] {
                rep.push_row(vec![q.into(), v.into()]);
            }
            sides.push(("bound", s.margin()));
        }
        "t0" => {
            let parts = unstack(&m, 2).ok_or_else(|| {
                CliError::Usage(format!("t0 expects a stacked (2v)x v matrix [X; A], got {}x{}", m.rows(), m.cols()))
            })?;
            let interp: Interpretation = cfg.interpretation.parse().map_err(CliError::Audit)?;
            let s = t0_sides(&parts[0], &parts[1], interp)?;
            for (q, v) in [("lower", s.lower), ("middle", s.middle), ("upper", s.upper), ("m", s.m as f64)] {
                rep.push_row(vec![q.into(), v.into()]);
            }
            let [lo, up] = s.margins();
            sides.extend([("lower", lo), ("upper", up)]);
        }
        other => {
            lookup(other)?;
            return Err(CliError::Usage(format!("verify-file supports t010, c1 and t0, not {other}")));
        }
    }
    for &(side, margin) in &sides {
        rep.push_row(vec![format!("margin_{side}").into(), margin.into()]);
        if margin < -cfg.tol {
            rep.violations.push(ViolationRow {
                trial: Some(0),
                margin,
                artifact: Some(shown.clone()),
                dim: Some(m.cols() as u64),
                side: side.into(),
                interpretation: (name == "t0").then(|| cfg.interpretation.clone()),
            });
        }
    }
    let min = sides.iter().map(|s| s.1).reduce(f64::min);
    let violated = !rep.violations.is_empty();
    rep.set_summary(1, min, verdict(violated));
    finish(&rep, cfg, violated)
}
