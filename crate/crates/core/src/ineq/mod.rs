//! Both sides of each matrix and harmonic-series inequality, and the audit
//! runner that searches generated ensembles for violations.

mod audit;
mod bounds;
mod harmonic;

pub use audit::{
    lookup, registry_names, run_audit, stack, t0_verdict_table, unstack, AuditOptions,
    AuditReport, CheckClass, CheckInfo, DimSummary, SideInfo, SideSummary, T0VerdictRow,
    Violation, DEFAULT_TOLERANCE, REGISTRY,
};
pub use bounds::{
    c1_sides, fan_dominance, kyfan_variational_check, sqrt_weighted_power_sum, t010_sides,
    t0_sides, Interpretation, KyFanCheck, PowerSumSides, T0Sides, DS_HYPOTHESIS_TOL, FAN_TOL,
    KYFAN_ATTAIN_TOL,
};
pub use harmonic::{
    chain_sweep, harmonic_inv_sqrt_bounds, harmonic_sweep, sqrt_sum_chain,
    weighted_harmonic_bounds, HarmonicBounds, SqrtSumChain, SweepSummary,
    WeightedHarmonicResult,
};

use crate::linalg::LinalgError;
use crate::spectra::GenError;

#[derive(Debug, thiserror::Error)]
pub enum AuditError {
    /// The input lies outside the class the inequality is stated for. Kept
    /// apart from violations, which are reported, not raised.
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown check {name:?}; registered checks: {registry}")]
    UnknownCheck { name: String, registry: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("artifact I/O: {0}")]
    Io(#[from] std::io::Error),
}
