//! Registry of audited inequalities and the seeded audit runner.
//!
//! A check evaluates one or more *sides* per instance. Each side yields a
//! margin `rhs − lhs` (or `−error` for identities); a margin below
//! `−tolerance` on an asserted side is a violation. Instances depend only on
//! `(master_seed, dim, trial)`, so trials run in parallel and are merged in
//! trial order.

use std::collections::BTreeMap;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{
    direct_sum, hs_norm, multiply, psd_order, singular_values, symmetric_eigen, Matrix, ORDER_TOL,
};
use crate::spectra::{
    self, normal_matrix, rng_for, trial_seed, GenKind, GenSpec, MAX_DIM, MIN_DIM,
};

use super::bounds::{
    c1_sides, fan_dominance, kyfan_variational_check, random_orthogonal_pair, t010_sides, t0_sides,
    Interpretation, KYFAN_ATTAIN_TOL,
};
use super::harmonic::{chain_sweep_with, harmonic_sweep_with, weighted_harmonic_bounds};
use super::AuditError;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckClass {
    /// Deterministic; one instance per integer `v` in the range.
    Sweep,
    /// Seeded; `trials` instances per dimension.
    Random,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SideInfo {
    pub name: &'static str,
    /// Unasserted sides are measured and counted but never produce
    /// violations.
    pub asserted: bool,
}

const fn side(name: &'static str) -> SideInfo {
    SideInfo {
        name,
        asserted: true,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CheckInfo {
    pub name: &'static str,
    pub class: CheckClass,
    pub sides: &'static [SideInfo],
    pub description: &'static str,
}

pub const REGISTRY: &[CheckInfo] = &[
    CheckInfo {
        name: "harmonic",
        class: CheckClass::Sweep,
        sides: &[side("lower"), side("upper")],
        description: "2√(v+1)−2 < Σ 1/√k < 2√v−1",
    },
    CheckInfo {
        name: "chain",
        class: CheckClass::Sweep,
        sides: &[side("cauchy"), side("cap")],
        description: "Σ√k ≤ (Σk)(Σ1/√k) ≤ v(v+1)(√v−0.5)",
    },
    CheckInfo {
        name: "weighted_harmonic",
        class: CheckClass::Random,
        sides: &[
            side("lower_statement"),
            side("upper"),
            SideInfo {
                name: "lower_proof",
                asserted: false,
            },
        ],
        description: "min x/(v(v+1)(√v−0.5)) < Σ x_k/√k < v(2√v−1) max x on weights in (0,10]",
    },
    CheckInfo {
        name: "t010",
        class: CheckClass::Random,
        sides: &[side("bound")],
        description: "‖Σ√k A^k‖₂ < v(v+1)(√v−0.5)(u−u^{v+1})/(1−u), PD A with u=‖A‖₂<1",
    },
    CheckInfo {
        name: "c1",
        class: CheckClass::Random,
        sides: &[side("bound")],
        description: "‖Σ√k A^k‖₂ ≤ v²(v+1)(√v−0.5), PD doubly stochastic A",
    },
    CheckInfo {
        name: "t0",
        class: CheckClass::Random,
        sides: &[side("lower"), side("upper")],
        description: "t_v(X)(2√(m+1)−2) < Σ_{k≤m} t_k(XA^{-1/2}) < (2√m−1)t₁(X), PD X, A",
    },
    CheckInfo {
        name: "kyfan",
        class: CheckClass::Random,
        sides: &[side("sampled"), side("attained")],
        description: "max over orthonormal k-tuples of Σ|y_jᵀAx_j| equals ‖A‖_(k)",
    },
    CheckInfo {
        name: "fan_dominance",
        class: CheckClass::Random,
        sides: &[side("equivalence")],
        description: "A⊕A dominates B⊕B iff A dominates B (all Ky Fan norms)",
    },
    CheckInfo {
        name: "weyl",
        class: CheckClass::Random,
        sides: &[side("monotone")],
        description: "λ_j(B) ≤ λ_j(B+P) for symmetric B, PSD P",
    },
    CheckInfo {
        name: "submult",
        class: CheckClass::Random,
        sides: &[side("bound")],
        description: "t_j(XY) ≤ t₁(X) t_j(Y)",
    },
    CheckInfo {
        name: "pm_order",
        class: CheckClass::Random,
        sides: &[side("bound")],
        description: "±A ≤ B ⇒ t_j(A) ≤ t_j(B⊕B)",
    },
    CheckInfo {
        name: "anticommutator",
        class: CheckClass::Random,
        sides: &[side("bound")],
        description: "t_j(AB+BA) ≤ t_j((A²+B²)⊕(A²+B²)), symmetric A, B",
    },
    CheckInfo {
        name: "unitary_invariance",
        class: CheckClass::Random,
        sides: &[side("singular_values")],
        description: "t(UAV) = t(A) for orthogonal U, V",
    },
    CheckInfo {
        name: "hs_singular",
        class: CheckClass::Random,
        sides: &[side("relative_error")],
        description: "‖A‖₂² = Σ t_j(A)²",
    },
    CheckInfo {
        name: "direct_sum_merge",
        class: CheckClass::Random,
        sides: &[side("singular_values")],
        description: "t(A⊕B) is the sorted merge of t(A) and t(B)",
    },
];

pub fn registry_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

pub fn lookup(name: &str) -> Result<&'static CheckInfo, AuditError> {
    REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| AuditError::UnknownCheck {
            name: name.to_string(),
            registry: registry_names().join(", "),
        })
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Summation-limit reading used by `t0`.
    pub interpretation: Interpretation,
    /// Where violating instances are written; nothing is written when unset.
    pub artifact_dir: Option<PathBuf>,
    /// Cap on persisted artifacts per asserted side, so a rarely failing
    /// side still gets its first instances written.
    pub max_artifacts: usize,
    /// Random orthonormal tuple pairs sampled per `kyfan` instance.
    pub kyfan_tuples: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            interpretation: Interpretation::FloorT1,
            artifact_dir: None,
            max_artifacts: 100,
            kyfan_tuples: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub dim: u64,
    pub trial_index: usize,
    pub side: String,
    pub margin: f64,
    pub artifact_path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideSummary {
    pub name: String,
    pub asserted: bool,
    pub min_margin: Option<f64>,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimSummary {
    pub dim: u64,
    pub trials: usize,
    pub min_margin: Option<f64>,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub check_name: String,
    pub class: CheckClass,
    pub dims: (u64, u64),
    pub trials_per_dim: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub tolerance: f64,
    pub interpretation: Option<String>,
    pub sides: Vec<SideSummary>,
    /// Empty for sweeps, which may span millions of `v`.
    pub per_dim: Vec<DimSummary>,
    pub violations: Vec<Violation>,
    /// Smallest margin over asserted sides; `None` when no trial ran.
    pub min_margin: Option<f64>,
    /// Auxiliary quantities: extremes keyed `max_*` / `min_*`, tallies keyed
    /// `count_*`.
    pub observations: BTreeMap<String, f64>,
}

impl AuditReport {
    pub fn min_margin_undefined(&self) -> bool {
        self.min_margin.is_none()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn side(&self, name: &str) -> Option<&SideSummary> {
        self.sides.iter().find(|s| s.name == name)
    }
}

struct Instance {
    margins: Vec<f64>,
    artifact: Option<Matrix>,
    observations: Vec<(&'static str, f64)>,
}

impl Instance {
    fn new(margins: Vec<f64>, artifact: Matrix) -> Self {
        Self {
            margins,
            artifact: Some(artifact),
            observations: Vec::new(),
        }
    }
}

/// Stacks matrices of equal width vertically (`[A; B]`), the layout used for
/// multi-operand artifacts.
pub fn stack(blocks: &[&Matrix]) -> Matrix {
    let cols = blocks[0].cols();
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let data: Vec<f64> = blocks
        .iter()
        .flat_map(|b| {
            assert_eq!(b.cols(), cols, "stacked blocks need equal width");
            b.as_slice().iter().copied()
        })
        .collect();
    Matrix::new(rows, cols, data).expect("stacked finite blocks")
}

/// Splits a `(parts·v) × v` stack back into its square blocks.
pub fn unstack(m: &Matrix, parts: usize) -> Option<Vec<Matrix>> {
    let v = m.cols();
    if m.rows() != parts * v {
        return None;
    }
    Some(
        (0..parts)
            .map(|p| {
                Matrix::new(v, v, m.as_slice()[p * v * v..(p + 1) * v * v].to_vec())
                    .expect("finite block")
            })
            .collect(),
    )
}

fn min_over(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, f64::min)
}

fn t_values(a: &Matrix) -> Result<Vec<f64>, AuditError> {
    Ok(singular_values(a)?.singular_values)
}

fn sym_normal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    normal_matrix(rng, n, n).symmetrized()
}

fn gram<R: Rng>(rng: &mut R, n: usize, scale: f64) -> Result<Matrix, AuditError> {
    let g = normal_matrix(rng, n, n).scale(scale);
    Ok(multiply(&g, &g.transpose())?.symmetrized())
}

fn run_instance(
    check: &CheckInfo,
    n: usize,
    seed: u64,
    opts: &AuditOptions,
) -> Result<Instance, AuditError> {
    let mut rng = rng_for(seed);
    let inst = match check.name {
        "weighted_harmonic" => {
            let xs: Vec<f64> = (0..n).map(|_| 10.0 * (1.0 - rng.random::<f64>())).collect();
            let r = weighted_harmonic_bounds(&xs)?;
            Instance::new(r.margins().to_vec(), Matrix::new(1, n, xs)?)
        }
        "t010" => {
            let a = spectra::generate(&GenSpec::new(n, GenKind::PdHsContraction, seed))?;
            let s = t010_sides(&a)?;
            Instance::new(vec![s.margin()], a)
        }
        "c1" => {
            let a = spectra::generate(&GenSpec::new(n, GenKind::PdDoublyStochastic, seed))?;
            let s = c1_sides(&a)?;
            let mut inst = Instance::new(vec![s.margin()], a);
            inst.observations.push(("max_hs_norm", s.hs_norm));
            inst.observations.push(("min_hs_norm", s.hs_norm));
            inst
        }
        "t0" => {
            let x = spectra::generate(&GenSpec::new(n, GenKind::PositiveDefinite, seed))?;
            let a_spec = GenSpec::new(n, GenKind::PositiveDefinite, trial_seed(seed, 1, 0))
                .with_param("lambda_min", 0.5)
                .with_param("lambda_max", n as f64);
            let a = spectra::generate(&a_spec)?;
            let s = t0_sides(&x, &a, opts.interpretation)?;
            let mut inst = Instance::new(s.margins().to_vec(), stack(&[&x, &a]));
            inst.observations.push(("max_m", s.m as f64));
            inst.observations.push(("min_m", s.m as f64));
            inst
        }
        "kyfan" => {
            let a = normal_matrix(&mut rng, n, n);
            let k = 1 + rng.random_range(0..n);
            let c = kyfan_variational_check(&a, k, opts.kyfan_tuples, trial_seed(seed, 2, 0))?;
            Instance::new(
                vec![
                    c.svd_value - c.best_sampled,
                    KYFAN_ATTAIN_TOL - (c.attained - c.svd_value).abs(),
                ],
                a,
            )
        }
        "fan_dominance" => {
            let a = normal_matrix(&mut rng, n, n);
            let (u, v) = random_orthogonal_pair(&mut rng, n)?;
            let s = 0.5 + rng.random::<f64>();
            let noise = normal_matrix(&mut rng, n, n).scale(0.3);
            let b = multiply(&multiply(&u, &a)?, &v)?.scale(s).add(&noise)?;
            let single = fan_dominance(&a, &b)?;
            let doubled = fan_dominance(&direct_sum(&[a.clone(), a.clone()])?, &direct_sum(&[b.clone(), b.clone()])?)?;
            let mut inst = Instance::new(vec![if single == doubled { 0.0 } else { -1.0 }], stack(&[&a, &b]));
            inst.observations.push(("count_dominant_pairs", f64::from(u8::from(single))));
            inst
        }
        "weyl" => {
            let b = sym_normal(&mut rng, n);
            let p = gram(&mut rng, n, 1.0)?;
            let lb = symmetric_eigen(&b)?.values();
            let lbp = symmetric_eigen(&b.add(&p)?)?.values();
            Instance::new(vec![min_over(lbp.iter().zip(&lb).map(|(x, y)| x - y))], stack(&[&b, &p]))
        }
        "submult" => {
            let x = normal_matrix(&mut rng, n, n);
            let y = normal_matrix(&mut rng, n, n);
            let tx1 = t_values(&x)?[0];
            let ty = t_values(&y)?;
            let txy = t_values(&multiply(&x, &y)?)?;
            Instance::new(
                vec![min_over(ty.iter().zip(&txy).map(|(a, b)| tx1 * a - b))],
                stack(&[&x, &y]),
            )
        }
        "pm_order" => {
            let a = sym_normal(&mut rng, n);
            let abs_a = symmetric_eigen(&a)?.reconstruct_with(f64::abs);
            let b = abs_a.add(&gram(&mut rng, n, 0.5)?)?;
            for sign in [1.0, -1.0] {
                if !psd_order(&b, &a.scale(sign), ORDER_TOL)?.holds {
                    return Err(AuditError::Hypothesis("generated pair violates ±A ≤ B".into()));
                }
            }
            let ta = t_values(&a)?;
            let tbb = t_values(&direct_sum(&[b.clone(), b.clone()])?)?;
            Instance::new(vec![min_over(ta.iter().zip(&tbb).map(|(x, y)| y - x))], stack(&[&a, &b]))
        }
        "anticommutator" => {
            let a = sym_normal(&mut rng, n);
            let b = sym_normal(&mut rng, n);
            let ab = multiply(&a, &b)?;
            let ba = multiply(&b, &a)?;
            let sq = multiply(&a, &a)?.add(&multiply(&b, &b)?)?;
            let lhs = t_values(&ab.add(&ba)?)?;
            let rhs = t_values(&direct_sum(&[sq.clone(), sq])?)?;
            Instance::new(vec![min_over(lhs.iter().zip(&rhs).map(|(x, y)| y - x))], stack(&[&a, &b]))
        }
        "unitary_invariance" => {
            let a = normal_matrix(&mut rng, n, n);
            let (u, v) = random_orthogonal_pair(&mut rng, n)?;
            let t = t_values(&a)?;
            let tu = t_values(&multiply(&multiply(&u, &a)?, &v)?)?;
            let err = t.iter().zip(&tu).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            Instance::new(vec![-err], a)
        }
        "hs_singular" => {
            let a = normal_matrix(&mut rng, n, n);
            let hs2 = hs_norm(&a).powi(2);
            let t2: f64 = t_values(&a)?.iter().map(|t| t * t).sum();
            Instance::new(vec![-(hs2 - t2).abs() / hs2.max(f64::MIN_POSITIVE)], a)
        }
        "direct_sum_merge" => {
            let a = normal_matrix(&mut rng, n, n);
            let b = normal_matrix(&mut rng, n, n);
            let mut merged = t_values(&a)?;
            merged.extend(t_values(&b)?);
            merged.sort_by(|x, y| y.total_cmp(x));
            let t = t_values(&direct_sum(&[a.clone(), b.clone()])?)?;
            let err = t.iter().zip(&merged).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
            Instance::new(vec![-err], stack(&[&a, &b]))
        }
        other => unreachable!("check {other} is not a random check"),
    };
    debug_assert_eq!(inst.margins.len(), check.sides.len());
    Ok(inst)
}

/// Artifact file stem: the check name, plus the interpretation for `t0`.
fn artifact_label(check: &CheckInfo, opts: &AuditOptions) -> String {
    if check.name == "t0" {
        format!("t0-{}", opts.interpretation.name())
    } else {
        check.name.to_string()
    }
}

fn write_artifact(dir: &Path, label: &str, dim: u64, trial: usize, m: &Matrix) -> Result<String, AuditError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{label}_{dim}_{trial}.mat"));
    fs::write(&path, m.to_text())?;
    Ok(path.display().to_string())
}

struct Accumulator<'a> {
    check: &'a CheckInfo,
    tol: f64,
    sides: Vec<SideSummary>,
    violations: Vec<Violation>,
    observations: BTreeMap<String, f64>,
    persisted: Vec<usize>,
}

impl<'a> Accumulator<'a> {
    fn new(check: &'a CheckInfo, tol: f64) -> Self {
        Self {
            check,
            tol,
            sides: check
                .sides
                .iter()
                .map(|s| SideSummary {
                    name: s.name.to_string(),
                    asserted: s.asserted,
                    min_margin: None,
                    violations: 0,
                })
                .collect(),
            violations: Vec::new(),
            observations: BTreeMap::new(),
            persisted: vec![0; check.sides.len()],
        }
    }

    /// Folds one instance in; returns (min asserted margin, violations).
    fn record(
        &mut self,
        dim: u64,
        trial: usize,
        margins: &[f64],
        artifact: Option<&Matrix>,
        artifact_sink: Option<(&Path, &str, usize)>,
    ) -> Result<(f64, usize), AuditError> {
        let mut min_asserted = f64::INFINITY;
        let mut new_violations = 0;
        let mut artifact_path: Option<String> = None;
        for (i, (&m, info)) in margins.iter().zip(self.check.sides).enumerate() {
            let s = &mut self.sides[i];
            s.min_margin = Some(s.min_margin.map_or(m, |x| x.min(m)));
            let failed = m < -self.tol;
            if failed {
                s.violations += 1;
            }
            if !info.asserted {
                continue;
            }
            min_asserted = min_asserted.min(m);
            if failed {
                new_violations += 1;
                if let (Some(mat), Some((dir, label, cap))) = (artifact, artifact_sink) {
                    if self.persisted[i] < cap {
                        if artifact_path.is_none() {
                            artifact_path = Some(write_artifact(dir, label, dim, trial, mat)?);
                        }
                        self.persisted[i] += 1;
                    }
                }
                self.violations.push(Violation {
                    dim,
                    trial_index: trial,
                    side: info.name.to_string(),
                    margin: m,
                    artifact_path: artifact_path.clone(),
                });
            }
        }
        Ok((min_asserted, new_violations))
    }

    fn observe(&mut self, key: &str, value: f64) {
        match self.observations.get_mut(key) {
            None => {
                self.observations.insert(key.to_string(), value);
            }
            Some(e) if key.starts_with("count_") => *e += value,
            Some(e) if key.starts_with("min_") => *e = e.min(value),
            Some(e) => *e = e.max(value),
        }
    }
}

/// Runs `trials` seeded instances of `check_name` for every dimension in
/// `dims` (sweeps run once per `v`) and summarises the margins.
pub fn run_audit(
    check_name: &str,
    dims: RangeInclusive<u64>,
    trials: usize,
    master_seed: u64,
    tolerance: f64,
    opts: &AuditOptions,
) -> Result<AuditReport, AuditError> {
    let check = lookup(check_name)?;
    if dims.start() > dims.end() {
        return Err(AuditError::InvalidArgument(format!(
            "empty dimension range {}..{}",
            dims.start(),
            dims.end()
        )));
    }
    if !(tolerance >= 0.0) {
        return Err(AuditError::InvalidArgument(format!("tolerance must be >= 0, got {tolerance}")));
    }
    if *dims.start() < MIN_DIM as u64 {
        return Err(AuditError::Hypothesis(format!(
            "dimension {} is outside the hypothesis v > 1",
            dims.start()
        )));
    }
    if check.class == CheckClass::Random && *dims.end() > MAX_DIM as u64 {
        return Err(AuditError::InvalidArgument(format!(
            "dimension {} exceeds the supported maximum {MAX_DIM}",
            dims.end()
        )));
    }

    let mut acc = Accumulator::new(check, tolerance);
    let label = artifact_label(check, opts);
    let sink = opts
        .artifact_dir
        .as_deref()
        .map(|d| (d, label.as_str(), opts.max_artifacts));
    let mut per_dim = Vec::new();
    let mut total = 0usize;
    let mut min_margin: Option<f64> = None;
    let fold_min = |cur: Option<f64>, m: f64| Some(cur.map_or(m, |x| x.min(m)));

    match check.class {
        CheckClass::Sweep if trials > 0 => {
            let mut err = None;
            let mut visit = |v: u64, margins: [f64; 2]| {
                if err.is_some() {
                    return;
                }
                match acc.record(v, 0, &margins, None, None) {
                    Ok((m, _)) => min_margin = fold_min(min_margin, m),
                    Err(e) => err = Some(e),
                }
            };
            let summary = if check.name == "harmonic" {
                harmonic_sweep_with(dims.clone(), |v, b| visit(v, [b.lower_margin(), b.upper_margin()]))?
            } else {
                chain_sweep_with(dims.clone(), tolerance, |v, c| visit(v, c.margins()))?
            };
            if let Some(e) = err {
                return Err(e);
            }
            total = summary.count as usize;
        }
        CheckClass::Sweep => {}
        CheckClass::Random => {
            for dim in dims.clone() {
                let n = dim as usize;
                let instances: Vec<Instance> = (0..trials)
                    .into_par_iter()
                    .map(|t| run_instance(check, n, trial_seed(master_seed, dim, t as u64), opts))
                    .collect::<Result<_, _>>()?;
                let mut dim_min: Option<f64> = None;
                let mut dim_violations = 0;
                for (t, inst) in instances.iter().enumerate() {
                    let (m, v) = acc.record(dim, t, &inst.margins, inst.artifact.as_ref(), sink)?;
                    dim_min = fold_min(dim_min, m);
                    dim_violations += v;
                    for &(k, x) in &inst.observations {
                        acc.observe(k, x);
                    }
                }
                if let Some(m) = dim_min {
                    min_margin = fold_min(min_margin, m);
                }
                total += trials;
                per_dim.push(DimSummary {
                    dim,
                    trials,
                    min_margin: dim_min,
                    violations: dim_violations,
                });
            }
        }
    }

    Ok(AuditReport {
        check_name: check.name.to_string(),
        class: check.class,
        dims: (*dims.start(), *dims.end()),
        trials_per_dim: if check.class == CheckClass::Sweep { 1 } else { trials },
        trials: total,
        master_seed,
        tolerance,
        interpretation: (check.name == "t0").then(|| opts.interpretation.name().to_string()),
        sides: acc.sides,
        per_dim,
        violations: acc.violations,
        min_margin,
        observations: acc.observations,
    })
}

/// One row of the per-interpretation verdict table for `t0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T0VerdictRow {
    pub interpretation: String,
    pub side: String,
    pub trials: usize,
    pub violations: usize,
    pub min_margin: Option<f64>,
    pub holds: bool,
}

/// Audits `t0` under every interpretation and tabulates each side.
pub fn t0_verdict_table(
    dims: RangeInclusive<u64>,
    trials: usize,
    master_seed: u64,
    tolerance: f64,
    opts: &AuditOptions,
) -> Result<(Vec<T0VerdictRow>, Vec<AuditReport>), AuditError> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for interp in Interpretation::ALL {
        let o = AuditOptions {
            interpretation: interp,
            ..opts.clone()
        };
        let report = run_audit("t0", dims.clone(), trials, master_seed, tolerance, &o)?;
        for s in &report.sides {
            rows.push(T0VerdictRow {
                interpretation: interp.name().to_string(),
                side: s.name.clone(),
                trials: report.trials,
                violations: s.violations,
                min_margin: s.min_margin,
                holds: s.violations == 0,
            });
        }
        reports.push(report);
    }
    Ok((rows, reports))
}
