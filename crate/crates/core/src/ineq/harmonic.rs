//! Scalar harmonic-series estimates:
//!
//! * `2√(v+1) − 2 < Σ_{k≤v} 1/√k < 2√v − 1`
//! * `Σ√k ≤ (Σk)(Σ1/√k) ≤ v(v+1)(√v − 0.5)`
//! * `min x / (v(v+1)(√v − 0.5)) < Σ x_k/√k < v(2√v − 1) max x`

use std::ops::RangeInclusive;

use serde::Serialize;

use super::AuditError;

fn require_v(v: u64) -> Result<(), AuditError> {
    if v < 2 {
        return Err(AuditError::Hypothesis(format!(
            "harmonic bounds need an integer v > 1, got {v}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HarmonicBounds {
    pub v: u64,
    pub sum_inv_sqrt: f64,
    pub lower: f64,
    pub upper: f64,
}

impl HarmonicBounds {
    fn from_sum(v: u64, sum_inv_sqrt: f64) -> Self {
        let vf = v as f64;
        Self {
            v,
            sum_inv_sqrt,
            lower: 2.0 * (vf + 1.0).sqrt() - 2.0,
            upper: 2.0 * vf.sqrt() - 1.0,
        }
    }

    pub fn lower_margin(&self) -> f64 {
        self.sum_inv_sqrt - self.lower
    }

    pub fn upper_margin(&self) -> f64 {
        self.upper - self.sum_inv_sqrt
    }

    /// Both strict inequalities.
    pub fn holds(&self) -> bool {
        self.lower < self.sum_inv_sqrt && self.sum_inv_sqrt < self.upper
    }
}

/// `Σ_{k=1}^{v} k^{-1/2}` summed in increasing `k`, with both bounds.
pub fn harmonic_inv_sqrt_bounds(v: u64) -> Result<HarmonicBounds, AuditError> {
    require_v(v)?;
    let sum = (1..=v).map(|k| 1.0 / (k as f64).sqrt()).sum();
    Ok(HarmonicBounds::from_sum(v, sum))
}

/// Outcome of an exhaustive sweep over a range of `v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub first: u64,
    pub last: u64,
    pub count: u64,
    /// Smallest margin per side, in the order the sides are named.
    pub min_margins: Vec<f64>,
    /// Values of `v` where some side failed.
    pub failures: Vec<u64>,
}

impl SweepSummary {
    fn new(range: &RangeInclusive<u64>, sides: usize) -> Self {
        Self {
            first: *range.start(),
            last: *range.end(),
            count: 0,
            min_margins: vec![f64::INFINITY; sides],
            failures: Vec::new(),
        }
    }

    fn record(&mut self, v: u64, margins: &[f64], tol: f64) {
        self.count += 1;
        for (m, &x) in self.min_margins.iter_mut().zip(margins) {
            *m = m.min(x);
        }
        if margins.iter().any(|&x| x < -tol) {
            self.failures.push(v);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Running-sum sweep of the inverse-square-root bounds.
///
/// The running sum adds terms in the same order as
/// [`harmonic_inv_sqrt_bounds`], so each `v` sees the identical value.
/// Strict inequalities are checked with zero slack.
pub fn harmonic_sweep(range: RangeInclusive<u64>) -> Result<SweepSummary, AuditError> {
    harmonic_sweep_with(range, |_, _| {})
}

pub(crate) fn harmonic_sweep_with(
    range: RangeInclusive<u64>,
    mut visit: impl FnMut(u64, &HarmonicBounds),
) -> Result<SweepSummary, AuditError> {
    require_v(*range.start())?;
    let mut summary = SweepSummary::new(&range, 2);
    let mut sum = 0.0;
    for k in 1..=*range.end() {
        sum += 1.0 / (k as f64).sqrt();
        if k < *range.start() {
            continue;
        }
        let b = HarmonicBounds::from_sum(k, sum);
        visit(k, &b);
        summary.count += 1;
        for (m, x) in summary.min_margins.iter_mut().zip([b.lower_margin(), b.upper_margin()]) {
            *m = m.min(x);
        }
        if !b.holds() {
            summary.failures.push(k);
        }
    }
    Ok(summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqrtSumChain {
    pub v: u64,
    pub sum_sqrt: f64,
    pub middle: f64,
    pub cap: f64,
}

impl SqrtSumChain {
    fn build(v: u64, sum_sqrt: f64, sum_inv_sqrt: f64) -> Self {
        let vf = v as f64;
        // Σk is exact in f64 for every v this is used with.
        let sum_k = (v * (v + 1) / 2) as f64;
        Self {
            v,
            sum_sqrt,
            middle: sum_k * sum_inv_sqrt,
            cap: vf * (vf + 1.0) * (vf.sqrt() - 0.5),
        }
    }

    pub fn margins(&self) -> [f64; 2] {
        [self.middle - self.sum_sqrt, self.cap - self.middle]
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.margins().iter().all(|&m| m >= -tol)
    }
}

/// `(Σ√k, (Σk)(Σ1/√k), v(v+1)(√v − 0.5))`.
pub fn sqrt_sum_chain(v: u64) -> Result<SqrtSumChain, AuditError> {
    require_v(v)?;
    let sum_sqrt = (1..=v).map(|k| (k as f64).sqrt()).sum();
    let inv = harmonic_inv_sqrt_bounds(v)?.sum_inv_sqrt;
    Ok(SqrtSumChain::build(v, sum_sqrt, inv))
}

pub fn chain_sweep(range: RangeInclusive<u64>, tol: f64) -> Result<SweepSummary, AuditError> {
    chain_sweep_with(range, tol, |_, _| {})
}

pub(crate) fn chain_sweep_with(
    range: RangeInclusive<u64>,
    tol: f64,
    mut visit: impl FnMut(u64, &SqrtSumChain),
) -> Result<SweepSummary, AuditError> {
    require_v(*range.start())?;
    let mut summary = SweepSummary::new(&range, 2);
    let (mut sum_sqrt, mut sum_inv) = (0.0, 0.0);
    for k in 1..=*range.end() {
        let r = (k as f64).sqrt();
        sum_sqrt += r;
        sum_inv += 1.0 / r;
        if k < *range.start() {
            continue;
        }
        let c = SqrtSumChain::build(k, sum_sqrt, sum_inv);
        visit(k, &c);
        summary.record(k, &c.margins(), tol);
    }
    Ok(summary)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedHarmonicResult {
    pub v: usize,
    pub value: f64,
    /// `min x / (v(v+1)(√v − 0.5))`, the bound as stated.
    pub lower_statement: f64,
    /// `min x / ((v+1)(√v − 0.5))`, the bound the argument actually reaches.
    pub lower_proof: f64,
    pub upper: f64,
}

impl WeightedHarmonicResult {
    /// `[value − lower_statement, upper − value, value − lower_proof]`.
    pub fn margins(&self) -> [f64; 3] {
        [
            self.value - self.lower_statement,
            self.upper - self.value,
            self.value - self.lower_proof,
        ]
    }
}

/// Both sides of the weighted inverse-square-root sum for positive weights.
pub fn weighted_harmonic_bounds(xs: &[f64]) -> Result<WeightedHarmonicResult, AuditError> {
    if xs.len() < 2 {
        return Err(AuditError::Hypothesis(format!(
            "weighted harmonic bounds need at least two weights, got {}",
            xs.len()
        )));
    }
    if let Some(bad) = xs.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(AuditError::Hypothesis(format!("weights must be positive, got {bad}")));
    }
    let v = xs.len();
    let vf = v as f64;
    let value = xs
        .iter()
        .enumerate()
        .map(|(i, x)| x / ((i + 1) as f64).sqrt())
        .sum();
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tail = (vf + 1.0) * (vf.sqrt() - 0.5);
    Ok(WeightedHarmonicResult {
        v,
        value,
        lower_statement: min / (vf * tail),
        lower_proof: min / tail,
        upper: vf * (2.0 * vf.sqrt() - 1.0) * max,
    })
}
