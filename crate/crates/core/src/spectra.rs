//! Seeded generators for the matrix classes the inequalities quantify over.
//!
//! Every generator is a pure function of its [`GenSpec`]: the seed drives a
//! ChaCha8 stream, so the same spec yields the same bits on every host.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::linalg::{is_doubly_stochastic, symmetric_eigen, LinalgError, Matrix};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;

/// Eigenvalue range for `positive_definite` draws.
pub const PD_EIGEN_RANGE: (f64, f64) = (0.1, 10.0);
/// Target Hilbert-Schmidt norm range for `pd_hs_contraction` draws.
pub const HS_CONTRACTION_RANGE: (f64, f64) = (0.05, 0.95);
/// Entry range of the positive seed matrix fed to Sinkhorn balancing.
pub const SINKHORN_SEED_RANGE: (f64, f64) = (0.1, 1.0);
pub const SINKHORN_TOL: f64 = 1e-12;
pub const SINKHORN_MAX_SWEEPS: usize = 10_000;
pub const DEFAULT_ALPHA: f64 = 0.25;
const GRAM_SCHMIDT_ATTEMPTS: usize = 8;
const GRAM_SCHMIDT_BREAKDOWN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Orthogonal,
    Symmetric,
    PositiveDefinite,
    PdHsContraction,
    DoublyStochastic,
    PdDoublyStochastic,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::Orthogonal,
        GenKind::Symmetric,
        GenKind::PositiveDefinite,
        GenKind::PdHsContraction,
        GenKind::DoublyStochastic,
        GenKind::PdDoublyStochastic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Orthogonal => "orthogonal",
            GenKind::Symmetric => "symmetric",
            GenKind::PositiveDefinite => "positive_definite",
            GenKind::PdHsContraction => "pd_hs_contraction",
            GenKind::DoublyStochastic => "doubly_stochastic",
            GenKind::PdDoublyStochastic => "pd_doubly_stochastic",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GenError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenSpec {
    pub dim: usize,
    pub kind: GenKind,
    pub seed: u64,
    pub params: BTreeMap<String, f64>,
}

impl GenSpec {
    pub fn new(dim: usize, kind: GenKind, seed: u64) -> Self {
        Self {
            dim,
            kind,
            seed,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("dimension {0} outside supported range {MIN_DIM}..={MAX_DIM}")]
    Dimension(usize),
    #[error("generator for {expected} called with spec of kind {got}")]
    KindMismatch { expected: GenKind, got: GenKind },
    #[error("unknown generator kind {0:?}")]
    UnknownKind(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("Gram-Schmidt broke down in all {GRAM_SCHMIDT_ATTEMPTS} attempts")]
    GramSchmidtBreakdown,
    #[error("Sinkhorn balancing did not converge after {sweeps} sweeps (residual {residual:e})")]
    SinkhornNoConvergence { sweeps: usize, residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Seed for trial `trial` of stream `stream` under `master`.
///
/// SplitMix64 finalisation over the three inputs; independent of execution
/// order, so trials can run in any order or in parallel.
pub fn trial_seed(master: u64, stream: u64, trial: u64) -> u64 {
    let mut z = master;
    for word in [stream, trial] {
        z = splitmix64(z ^ splitmix64(word.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    z
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic RNG for a seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check(spec: &GenSpec, expected: GenKind) -> Result<(), GenError> {
    if spec.kind != expected {
        return Err(GenError::KindMismatch {
            expected,
            got: spec.kind,
        });
    }
    if !(MIN_DIM..=MAX_DIM).contains(&spec.dim) {
        return Err(GenError::Dimension(spec.dim));
    }
    Ok(())
}

/// Dispatches on `spec.kind`.
pub fn generate(spec: &GenSpec) -> Result<Matrix, GenError> {
    match spec.kind {
        GenKind::Orthogonal => gen_orthogonal(spec),
        GenKind::Symmetric => gen_symmetric(spec),
        GenKind::PositiveDefinite => gen_positive_definite(spec),
        GenKind::PdHsContraction => gen_pd_hs_contraction(spec),
        GenKind::DoublyStochastic => gen_doubly_stochastic(spec),
        GenKind::PdDoublyStochastic => gen_pd_doubly_stochastic(spec),
    }
}

/// Matrix of independent standard normal draws.
pub fn normal_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::new(rows, cols, data).expect("normal draws are finite")
}

/// Orthogonal matrix from modified Gram-Schmidt on Gaussian columns.
pub fn orthogonal_from_rng<R: Rng>(rng: &mut R, n: usize) -> Result<Matrix, GenError> {
    'attempt: for _ in 0..GRAM_SCHMIDT_ATTEMPTS {
        let draw = normal_matrix(rng, n, n);
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| draw.column(j)).collect();
        for j in 0..n {
            let original = norm(&cols[j]);
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let d = dot(&done[i], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= d * q;
                }
            }
            let remaining = norm(&cols[j]);
            if remaining <= GRAM_SCHMIDT_BREAKDOWN * original {
                continue 'attempt;
            }
            cols[j].iter_mut().for_each(|x| *x /= remaining);
        }
        return Ok(Matrix::from_columns(&cols));
    }
    Err(GenError::GramSchmidtBreakdown)
}

pub fn gen_orthogonal(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::Orthogonal)?;
    orthogonal_from_rng(&mut rng_for(spec.seed), spec.dim)
}

/// Symmetric matrix `(G + Gᵀ)/2` with Gaussian `G`.
pub fn gen_symmetric(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::Symmetric)?;
    Ok(normal_matrix(&mut rng_for(spec.seed), spec.dim, spec.dim).symmetrized())
}

/// `Q diag(λ) Qᵀ` with `λ` uniform on `[lambda_min, lambda_max]`
/// (defaults 0.1 and 10).
pub fn gen_positive_definite(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::PositiveDefinite)?;
    let lo = spec.param("lambda_min", PD_EIGEN_RANGE.0);
    let hi = spec.param("lambda_max", PD_EIGEN_RANGE.1);
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(GenError::Parameter(format!(
            "eigenvalue range [{lo}, {hi}] must be positive and ordered"
        )));
    }
    let mut rng = rng_for(spec.seed);
    Ok(pd_from_rng(&mut rng, spec.dim, lo, hi)?)
}

fn pd_from_rng<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Result<Matrix, GenError> {
    let q = orthogonal_from_rng(rng, n)?;
    let lambdas: Vec<f64> = (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v: f64 = (0..n).map(|k| q.get(i, k) * lambdas[k] * q.get(j, k)).sum();
            out.set(i, j, v);
        }
    }
    Ok(out.symmetrized())
}

/// Positive definite matrix rescaled to a Hilbert-Schmidt norm drawn
/// uniformly from `[0.05, 0.95]`.
pub fn gen_pd_hs_contraction(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::PdHsContraction)?;
    let mut rng = rng_for(spec.seed);
    let a = pd_from_rng(&mut rng, spec.dim, PD_EIGEN_RANGE.0, PD_EIGEN_RANGE.1)?;
    let (lo, hi) = HS_CONTRACTION_RANGE;
    let target = lo + (hi - lo) * rng.random::<f64>();
    Ok(a.scale(target / crate::linalg::hs_norm(&a)))
}

/// Alternating row/column normalisation until every line sum is within
/// [`SINKHORN_TOL`] of one.
pub fn sinkhorn_balance(mut a: Matrix) -> Result<Matrix, GenError> {
    let n = a.rows();
    let residual = |m: &Matrix| -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            worst = worst.max((m.row(i).iter().sum::<f64>() - 1.0).abs());
            worst = worst.max(((0..n).map(|r| m.get(r, i)).sum::<f64>() - 1.0).abs());
        }
        worst
    };
    for _ in 0..SINKHORN_MAX_SWEEPS {
        if residual(&a) <= SINKHORN_TOL {
            return Ok(a);
        }
        for i in 0..n {
            let s: f64 = a.row(i).iter().sum();
            for j in 0..n {
                a.set(i, j, a.get(i, j) / s);
            }
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| a.get(i, j)).sum();
            for i in 0..n {
                a.set(i, j, a.get(i, j) / s);
            }
        }
    }
    let r = residual(&a);
    if r <= SINKHORN_TOL {
        Ok(a)
    } else {
        Err(GenError::SinkhornNoConvergence {
            sweeps: SINKHORN_MAX_SWEEPS,
            residual: r,
        })
    }
}

pub fn gen_doubly_stochastic(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::DoublyStochastic)?;
    ds_from_seed(spec.dim, spec.seed)
}

fn ds_from_seed(n: usize, seed: u64) -> Result<Matrix, GenError> {
    let mut rng = rng_for(seed);
    let (lo, hi) = SINKHORN_SEED_RANGE;
    let data = (0..n * n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
    sinkhorn_balance(Matrix::new(n, n, data)?)
}

/// `(1 − α) I + α S` for a symmetric doubly stochastic `S`.
///
/// With `α ∈ (0, 0.5)` the result is symmetric, doubly stochastic and has
/// smallest eigenvalue at least `1 − 2α`.
pub fn pd_doubly_stochastic_from(s: &Matrix, alpha: f64) -> Result<Matrix, GenError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(GenError::Parameter(format!("alpha = {alpha} outside (0, 0.5)")));
    }
    if !s.is_symmetric(crate::linalg::SYMMETRY_REL_TOL) || !is_doubly_stochastic(s, 1e-10) {
        return Err(GenError::Parameter(
            "mixing matrix must be symmetric and doubly stochastic".into(),
        ));
    }
    Ok(Matrix::identity(s.rows()).scale(1.0 - alpha).add(&s.scale(alpha))?)
}

pub fn gen_pd_doubly_stochastic(spec: &GenSpec) -> Result<Matrix, GenError> {
    check(spec, GenKind::PdDoublyStochastic)?;
    let alpha = spec.param("alpha", DEFAULT_ALPHA);
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(GenError::Parameter(format!("alpha = {alpha} outside (0, 0.5)")));
    }
    let d = ds_from_seed(spec.dim, spec.seed)?;
    // The average of a doubly stochastic matrix and its transpose is again
    // doubly stochastic, and exactly symmetric.
    let s = d.symmetrized();
    pd_doubly_stochastic_from(&s, alpha)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &Matrix) -> Result<f64, LinalgError> {
    Ok(symmetric_eigen(a)?.min_value())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
