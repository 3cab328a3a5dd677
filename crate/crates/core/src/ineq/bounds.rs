//! Both sides of the matrix inequalities, evaluated exactly as stated, plus
//! the Ky Fan variational identity and Fan dominance.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::linalg::{
    hs_norm, inverse_sqrt_pd, is_doubly_stochastic, kyfan_norm, multiply, singular_values,
    symmetric_eigen, Matrix, PD_FLOOR, SYMMETRY_REL_TOL,
};
use crate::spectra::{orthogonal_from_rng, rng_for};

use super::AuditError;

/// Tolerance for the doubly stochastic hypothesis of the `c1` bound.
pub const DS_HYPOTHESIS_TOL: f64 = 1e-8;

fn require_pd(a: &Matrix, what: &str) -> Result<(), AuditError> {
    if !a.is_square() || a.rows() < 2 {
        return Err(AuditError::Hypothesis(format!(
            "{what} must be square of order v > 1, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_symmetric(SYMMETRY_REL_TOL) {
        return Err(AuditError::Hypothesis(format!(
            "{what} must be symmetric (asymmetry {:e})",
            a.asymmetry()
        )));
    }
    let min = symmetric_eigen(a)?.min_value();
    if min <= PD_FLOOR {
        return Err(AuditError::Hypothesis(format!(
            "{what} must be positive definite (smallest eigenvalue {min:e})"
        )));
    }
    Ok(())
}

/// `Σ_{k=1}^{v} √k · A^k` with powers by repeated multiplication.
pub fn sqrt_weighted_power_sum(a: &Matrix) -> Result<Matrix, AuditError> {
    let v = a.rows();
    let mut power = a.clone();
    let mut acc = a.clone();
    for k in 2..=v {
        power = multiply(&power, a)?;
        acc = acc.add(&power.scale((k as f64).sqrt()))?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerSumSides {
    pub lhs: f64,
    pub rhs: f64,
    /// `‖A‖₂` of the operand.
    pub hs_norm: f64,
}

impl PowerSumSides {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `‖Σ √k A^k‖₂` against `v(v+1)(√v − 0.5)(u − u^{v+1})/(1 − u)`, `u = ‖A‖₂`.
///
/// Requires positive definite `A` with `‖A‖₂ < 1`; the bound is negative or
/// undefined otherwise, so such input is a hypothesis error.
pub fn t010_sides(a: &Matrix) -> Result<PowerSumSides, AuditError> {
    require_pd(a, "A")?;
    let u = hs_norm(a);
    if u >= 1.0 {
        return Err(AuditError::Hypothesis(format!(
            "Hilbert-Schmidt norm {u} must be < 1 for the power-sum bound"
        )));
    }
    let v = a.rows() as f64;
    let lhs = hs_norm(&sqrt_weighted_power_sum(a)?);
    let rhs = v * (v + 1.0) * (v.sqrt() - 0.5) * (u - u.powi(a.rows() as i32 + 1)) / (1.0 - u);
    Ok(PowerSumSides { lhs, rhs, hs_norm: u })
}

/// `‖Σ √k A^k‖₂` against `v²(v+1)(√v − 0.5)` for positive definite doubly
/// stochastic `A`.
pub fn c1_sides(a: &Matrix) -> Result<PowerSumSides, AuditError> {
    require_pd(a, "A")?;
    if !is_doubly_stochastic(a, DS_HYPOTHESIS_TOL) {
        return Err(AuditError::Hypothesis("A must be doubly stochastic".into()));
    }
    let v = a.rows() as f64;
    let lhs = hs_norm(&sqrt_weighted_power_sum(a)?);
    let rhs = v * v * (v + 1.0) * (v.sqrt() - 0.5);
    Ok(PowerSumSides {
        lhs,
        rhs,
        hs_norm: hs_norm(a),
    })
}

/// Reading of the summation limit `⌊t_k(A)⌋` and the bound's `⌈t_k(A)⌉`,
/// whose index `k` is not bound by the statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    /// `m = ⌊t₁(A)⌋`, clamped to `[1, v]`.
    FloorT1,
    /// `m = ⌊t_v(A)⌋`, clamped to `[1, v]`.
    FloorTv,
    /// `m = v`.
    Dim,
}

impl Interpretation {
    pub const ALL: [Interpretation; 3] = [
        Interpretation::FloorT1,
        Interpretation::FloorTv,
        Interpretation::Dim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Interpretation::FloorT1 => "floor_t1",
            Interpretation::FloorTv => "floor_tv",
            Interpretation::Dim => "dim",
        }
    }

    /// Zero-based index `k` of the singular value whose floor must not
    /// exceed `v`.
    pub fn hypothesis_index(self, v: usize) -> usize {
        match self {
            Interpretation::FloorTv => v - 1,
            Interpretation::FloorT1 | Interpretation::Dim => 0,
        }
    }

    /// Summation limit for singular values `t` (decreasing) of `A`.
    pub fn limit(self, t: &[f64]) -> usize {
        let v = t.len();
        let clamp = |x: f64| (x.floor().max(1.0) as usize).min(v);
        match self {
            Interpretation::FloorT1 => clamp(t[0]),
            Interpretation::FloorTv => clamp(t[v - 1]),
            Interpretation::Dim => v,
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Interpretation {
    type Err = AuditError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Interpretation::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| {
                AuditError::InvalidArgument(format!(
                    "unknown interpretation {s:?} (expected floor_t1, floor_tv or dim)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct T0Sides {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub m: usize,
}

impl T0Sides {
    /// `[middle − lower, upper − middle]`.
    pub fn margins(&self) -> [f64; 2] {
        [self.middle - self.lower, self.upper - self.middle]
    }
}

/// `t_v(X)(2√(m+1) − 2)`, `Σ_{k≤m} t_k(X A^{-1/2})` and `(2√m − 1) t₁(X)`.
///
/// Only evaluates the three quantities; whether the chain holds is left to
/// the caller.
pub fn t0_sides(x: &Matrix, a: &Matrix, interpretation: Interpretation) -> Result<T0Sides, AuditError> {
    if x.shape() != a.shape() {
        return Err(AuditError::Hypothesis(format!(
            "X and A must have the same order, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            a.rows(),
            a.cols()
        )));
    }
    require_pd(x, "X")?;
    require_pd(a, "A")?;
    let v = a.rows();
    let ta = singular_values(a)?.singular_values;
    let gate = interpretation.hypothesis_index(v);
    if ta[gate].floor() > v as f64 {
        return Err(AuditError::Hypothesis(format!(
            "⌊t_{}(A)⌋ must not exceed v = {v} (t_{}(A) = {})",
            gate + 1,
            gate + 1,
            ta[gate]
        )));
    }
    let m = interpretation.limit(&ta);
    let tx = singular_values(x)?.singular_values;
    let product = multiply(x, &inverse_sqrt_pd(a)?)?;
    let middle = singular_values(&product)?.singular_values[..m].iter().sum();
    let mf = m as f64;
    Ok(T0Sides {
        lower: tx[v - 1] * (2.0 * (mf + 1.0).sqrt() - 2.0),
        middle,
        upper: (2.0 * mf.sqrt() - 1.0) * tx[0],
        m,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KyFanCheck {
    /// Best `Σ|y_jᵀ A x_j|` over the sampled orthonormal k-tuples.
    pub best_sampled: f64,
    pub svd_value: f64,
    /// `Σ|u_jᵀ A v_j|` for the top-k singular vector pairs.
    pub attained: f64,
}

pub const KYFAN_ATTAIN_TOL: f64 = 1e-8;

/// Variational characterisation of the Ky Fan k-norm.
pub fn kyfan_variational_check(
    a: &Matrix,
    k: usize,
    tuples: usize,
    seed: u64,
) -> Result<KyFanCheck, AuditError> {
    if !a.is_square() {
        return Err(AuditError::InvalidArgument("Ky Fan check needs a square matrix".into()));
    }
    let v = a.rows();
    if k == 0 || k > v {
        return Err(AuditError::InvalidArgument(format!("k = {k} outside 1..={v}")));
    }
    let svd_value = kyfan_norm(a, k)?;

    let pair_sum = |xs: &[Vec<f64>], ys: &[Vec<f64>]| -> f64 {
        xs.iter()
            .zip(ys)
            .map(|(x, y)| dot(y, &a.mat_vec(x)).abs())
            .sum()
    };

    let mut rng = rng_for(seed);
    let mut best_sampled = 0.0_f64;
    for _ in 0..tuples {
        let qx = orthogonal_from_rng(&mut rng, v)?;
        let qy = orthogonal_from_rng(&mut rng, v)?;
        let xs: Vec<Vec<f64>> = (0..k).map(|j| qx.column(j)).collect();
        let ys: Vec<Vec<f64>> = (0..k).map(|j| qy.column(j)).collect();
        best_sampled = best_sampled.max(pair_sum(&xs, &ys));
    }

    let (rights, lefts) = top_singular_pairs(a, k)?;
    let attained = pair_sum(&rights, &lefts);
    Ok(KyFanCheck {
        best_sampled,
        svd_value,
        attained,
    })
}

/// Right singular vectors `v_j` from the eigenvectors of `AᵀA` and matching
/// unit left vectors `u_j = A v_j / ‖A v_j‖` (any unit vector when
/// `A v_j = 0`; it contributes nothing).
fn top_singular_pairs(a: &Matrix, k: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), AuditError> {
    let gram = multiply(&a.transpose(), a)?;
    let eig = symmetric_eigen(&gram)?;
    let mut rights = Vec::with_capacity(k);
    let mut lefts = Vec::with_capacity(k);
    for pair in eig.pairs.iter().take(k) {
        let av = a.mat_vec(&pair.vector);
        let n = dot(&av, &av).sqrt();
        let left = if n > 0.0 {
            av.iter().map(|x| x / n).collect()
        } else {
            pair.vector.clone()
        };
        rights.push(pair.vector.clone());
        lefts.push(left);
    }
    Ok((rights, lefts))
}

pub const FAN_TOL: f64 = 1e-9;

/// `‖A‖_(k) ≥ ‖B‖_(k) − 1e-9` for every k, i.e. `A` dominates `B` in every
/// unitarily invariant norm.
pub fn fan_dominance(a: &Matrix, b: &Matrix) -> Result<bool, AuditError> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(AuditError::InvalidArgument(format!(
            "Fan dominance needs square matrices of equal order, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let ta = singular_values(a)?.singular_values;
    let tb = singular_values(b)?.singular_values;
    let (mut sa, mut sb) = (0.0, 0.0);
    for (x, y) in ta.iter().zip(&tb) {
        sa += x;
        sb += y;
        if sa < sb - FAN_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random orthonormal pair helper used by property checks.
pub(crate) fn random_orthogonal_pair<R: Rng>(rng: &mut R, n: usize) -> Result<(Matrix, Matrix), AuditError> {
    Ok((orthogonal_from_rng(rng, n)?, orthogonal_from_rng(rng, n)?))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::direct_sum;

    #[test]
    fn t010_diag_spot_value() {
        // Reference: 30-digit evaluation of both sides.
        let s = t010_sides(&Matrix::from_diag(&[0.1, 0.2])).unwrap();
        assert!((s.lhs - 0.280_812_827_560_842_94).abs() < 1e-14);
        assert!((s.rhs - 1.500_810_271_563_019_2).abs() < 1e-13);
        assert!(s.lhs < s.rhs);
    }

    #[test]
    fn t010_small_epsilon() {
        let s = t010_sides(&Matrix::identity(2).scale(1e-6)).unwrap();
        assert!((s.lhs - 1.414_215_562_373_095e-6).abs() < 1e-18);
        assert!((s.rhs - 7.757_370_283_443_463e-6).abs() < 1e-17);
        assert!(s.lhs < s.rhs);
    }

    #[test]
    fn t010_hypothesis_errors() {
        assert!(matches!(t010_sides(&Matrix::identity(2)), Err(AuditError::Hypothesis(_))));
        assert!(matches!(
            t010_sides(&Matrix::from_diag(&[0.5, -0.1])),
            Err(AuditError::Hypothesis(_))
        ));
        assert!(matches!(t010_sides(&Matrix::from_diag(&[0.5])), Err(AuditError::Hypothesis(_))));
    }

    #[test]
    fn power_sum_matches_eigen_powering() {
        let a = Matrix::from_rows(&[[0.3, 0.1, 0.0], [0.1, 0.25, 0.05], [0.0, 0.05, 0.2]]);
        let iterated = sqrt_weighted_power_sum(&a).unwrap();
        let eig = symmetric_eigen(&a).unwrap();
        let via_eigen = eig.reconstruct_with(|l| (1..=3).map(|k| (k as f64).sqrt() * l.powi(k)).sum());
        assert!(iterated.max_abs_diff(&via_eigen) < 1e-14);
    }

    #[test]
    fn c1_examples() {
        let s = c1_sides(&Matrix::identity(2)).unwrap();
        assert!((s.lhs - 3.414_213_562_373_095).abs() < 1e-14);
        assert!((s.rhs - 10.970_562_748_477_141).abs() < 1e-13);
        assert!((s.hs_norm - 2f64.sqrt()).abs() < 1e-15);

        let s = c1_sides(&Matrix::from_rows(&[[0.6, 0.4], [0.4, 0.6]])).unwrap();
        assert!((s.lhs - 2.427_808_588_366_092_7).abs() < 1e-13);
        assert!(s.lhs < s.rhs);

        let not_ds = Matrix::from_diag(&[0.5, 0.5]);
        assert!(matches!(c1_sides(&not_ds), Err(AuditError::Hypothesis(_))));
    }

    #[test]
    fn t0_floor_t1_counterexample() {
        let x = Matrix::identity(2);
        let a = Matrix::identity(2).scale(2.25);
        let s = t0_sides(&x, &a, Interpretation::FloorT1).unwrap();
        assert_eq!(s.m, 2);
        assert!((s.middle - 4.0 / 3.0).abs() < 1e-12);
        assert!((s.lower - 1.464_101_615_137_754_6).abs() < 1e-14);
        assert!((s.upper - 1.828_427_124_746_190_1).abs() < 1e-14);
        assert!(s.middle < s.lower, "literal lower bound fails here");
    }

    #[test]
    fn t0_dim_identity() {
        let i = Matrix::identity(2);
        let s = t0_sides(&i, &i, Interpretation::Dim).unwrap();
        assert_eq!(s.m, 2);
        assert!((s.middle - 2.0).abs() < 1e-14);
        assert!(s.middle > s.upper, "literal upper bound fails here");

        let i5 = Matrix::identity(5);
        let s = t0_sides(&i5, &i5, Interpretation::Dim).unwrap();
        assert!((s.middle - 5.0).abs() < 1e-13);
    }

    #[test]
    fn t0_limits_per_interpretation() {
        let t = [3.7, 2.2, 0.4];
        assert_eq!(Interpretation::FloorT1.limit(&t), 3);
        assert_eq!(Interpretation::FloorTv.limit(&t), 1);
        assert_eq!(Interpretation::Dim.limit(&t), 3);
        assert_eq!(Interpretation::FloorT1.limit(&[9.0, 1.0]), 2);
    }

    #[test]
    fn t0_hypothesis_gate() {
        let x = Matrix::identity(2);
        let a = Matrix::identity(2).scale(2.5);
        assert!(t0_sides(&x, &a, Interpretation::Dim).is_ok());
        let a = Matrix::identity(2).scale(3.5);
        for interp in Interpretation::ALL {
            assert!(matches!(t0_sides(&x, &a, interp), Err(AuditError::Hypothesis(_))));
        }
        let a = Matrix::from_diag(&[3.5, 1.0]);
        assert!(t0_sides(&x, &a, Interpretation::FloorTv).is_ok());
        assert!(t0_sides(&x, &a, Interpretation::FloorT1).is_err());
        assert!(t0_sides(&x, &Matrix::identity(3), Interpretation::Dim).is_err());
    }

    #[test]
    fn kyfan_examples() {
        let d = Matrix::from_diag(&[3.0, 2.0, 1.0]);
        let c = kyfan_variational_check(&d, 2, 50, 7).unwrap();
        assert_eq!(c.svd_value, 5.0);
        assert!((c.attained - 5.0).abs() < 1e-12);
        assert!(c.best_sampled <= 5.0 + 1e-9);

        let z = Matrix::zeros(3, 3);
        let c = kyfan_variational_check(&z, 2, 10, 1).unwrap();
        assert_eq!((c.best_sampled, c.svd_value, c.attained), (0.0, 0.0, 0.0));

        assert!(kyfan_variational_check(&d, 0, 1, 0).is_err());
        assert!(kyfan_variational_check(&d, 4, 1, 0).is_err());
    }

    #[test]
    fn fan_dominance_examples() {
        let i = Matrix::identity(3);
        assert!(fan_dominance(&i.scale(2.0), &i).unwrap());
        assert!(!fan_dominance(&i, &i.scale(2.0)).unwrap());
        let a = Matrix::from_diag(&[3.0, 0.0]);
        let b = Matrix::from_diag(&[2.0, 2.0]);
        assert!(!fan_dominance(&a, &b).unwrap());
        let aa = direct_sum(&[a.clone(), a]).unwrap();
        let bb = direct_sum(&[b.clone(), b]).unwrap();
        assert!(!fan_dominance(&aa, &bb).unwrap());
        assert!(fan_dominance(&i, &Matrix::identity(2)).is_err());
    }
}
