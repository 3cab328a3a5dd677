//! Cyclic Jacobi eigensolver for real symmetric matrices and the spectral
//! quantities built on it.

use serde::Serialize;

use super::matrix::{multiply, Matrix};
use super::{hs_norm, LinalgError, PD_FLOOR, SYMMETRY_REL_TOL};

/// Sweep limit for the cyclic Jacobi method.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass, relative to the input norm, at which the
/// Jacobi iteration stops.
pub const OFF_DIAGONAL_REL_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigenvalues in decreasing order together with orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub pairs: Vec<EigenPair>,
}

impl SymmetricEigen {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    /// Orthogonal matrix with the eigenvectors as columns.
    pub fn vectors(&self) -> Matrix {
        Matrix::from_columns(&self.pairs.iter().map(|p| p.vector.clone()).collect::<Vec<_>>())
    }

    pub fn min_value(&self) -> f64 {
        self.pairs.last().map(|p| p.value).unwrap_or(f64::NAN)
    }

    /// `Q · diag(f(λ)) · Qᵀ`, symmetrized.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.pairs.len();
        let mut out = Matrix::zeros(n, n);
        for p in &self.pairs {
            let w = f(p.value);
            for i in 0..n {
                for j in 0..n {
                    out.set(i, j, out.get(i, j) + w * p.vector[i] * p.vector[j]);
                }
            }
        }
        out.symmetrized()
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j) * a.get(i, j);
            }
        }
    }
    acc.sqrt()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            op: "symmetric_eigen",
            shape: a.shape(),
        });
    }
    if !a.is_symmetric(SYMMETRY_REL_TOL) {
        return Err(LinalgError::NotSymmetric {
            asymmetry: a.asymmetry(),
        });
    }
    let n = a.rows();
    let mut work = a.symmetrized();
    let mut vecs = Matrix::identity(n);
    let threshold = OFF_DIAGONAL_REL_TOL * hs_norm(a);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&work);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = work.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = work.get(p, p);
                let aqq = work.get(q, q);
                // Rotation angle chosen so the (p, q) entry vanishes; the
                // smaller root of t² + 2θt − 1 = 0 keeps |angle| ≤ π/4.
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    let akp = work.get(k, p);
                    let akq = work.get(k, q);
                    work.set(k, p, c * akp - s * akq);
                    work.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = work.get(p, k);
                    let aqk = work.get(q, k);
                    work.set(p, k, c * apk - s * aqk);
                    work.set(q, k, s * apk + c * aqk);
                }
                work.set(p, q, 0.0);
                work.set(q, p, 0.0);

                for k in 0..n {
                    let vkp = vecs.get(k, p);
                    let vkq = vecs.get(k, q);
                    vecs.set(k, p, c * vkp - s * vkq);
                    vecs.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|j| EigenPair {
            value: work.get(j, j),
            vector: vecs.column(j),
        })
        .collect();
    // Stable sort: equal eigenvalues keep their sweep order.
    pairs.sort_by(|x, y| y.value.total_cmp(&x.value));
    Ok(SymmetricEigen { pairs })
}

/// Singular values, plus symmetric eigenvalues when the source is symmetric.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralSummary {
    pub singular_values: Vec<f64>,
    pub eigenvalues_symmetric: Option<Vec<f64>>,
}

impl SpectralSummary {
    pub fn t(&self, j: usize) -> f64 {
        self.singular_values[j]
    }

    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }
}

/// Singular values `t_j = sqrt(max(λ_j(AᵀA), 0))` in decreasing order.
///
/// For rectangular input the `min(rows, cols)` leading values are returned.
pub fn singular_values(a: &Matrix) -> Result<SpectralSummary, LinalgError> {
    let gram = multiply(&a.transpose(), a)?;
    let eig = symmetric_eigen(&gram)?;
    let count = a.rows().min(a.cols());
    let singular_values = eig
        .values()
        .into_iter()
        .take(count)
        .map(|l| l.max(0.0).sqrt())
        .collect();
    let eigenvalues_symmetric = if a.is_square() && a.is_symmetric(SYMMETRY_REL_TOL) {
        Some(symmetric_eigen(a)?.values())
    } else {
        None
    };
    Ok(SpectralSummary {
        singular_values,
        eigenvalues_symmetric,
    })
}

/// Witness for the Loewner order `rhs ≤ lhs`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsdOrderWitness {
    pub lhs_minus_rhs_min_eigenvalue: f64,
    pub holds: bool,
}

/// Decides `b ≤ a` by the smallest eigenvalue of `a − b`.
pub fn psd_order(a: &Matrix, b: &Matrix, order_tolerance: f64) -> Result<PsdOrderWitness, LinalgError> {
    if a.shape() != b.shape() {
        return Err(LinalgError::DimensionMismatch {
            op: "psd_order",
            left: a.shape(),
            right: b.shape(),
        });
    }
    for m in [a, b] {
        if !m.is_symmetric(SYMMETRY_REL_TOL) {
            return Err(LinalgError::NotSymmetric {
                asymmetry: m.asymmetry(),
            });
        }
    }
    let diff = a.sub(b)?.symmetrized();
    let min = symmetric_eigen(&diff)?.min_value();
    Ok(PsdOrderWitness {
        lhs_minus_rhs_min_eigenvalue: min,
        holds: min >= -order_tolerance,
    })
}

/// `A^{-1/2}` for symmetric positive definite `A`.
pub fn inverse_sqrt_pd(a: &Matrix) -> Result<Matrix, LinalgError> {
    let eig = symmetric_eigen(a)?;
    let min = eig.min_value();
    if min <= PD_FLOOR {
        return Err(LinalgError::NotPositiveDefinite { eigenvalue: min });
    }
    Ok(eig.reconstruct_with(|l| 1.0 / l.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym_from_seed(n: usize, mut s: u64) -> Matrix {
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = next();
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    #[test]
    fn diagonal_input() {
        let e = symmetric_eigen(&Matrix::from_diag(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(e.values(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn two_by_two_a_plus_minus_b() {
        let e = symmetric_eigen(&Matrix::from_rows(&[[0.6, 0.4], [0.4, 0.6]])).unwrap();
        let v = e.values();
        assert!((v[0] - 1.0).abs() < 1e-14);
        assert!((v[1] - 0.2).abs() < 1e-14);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        for (n, seed) in [(2, 1), (5, 2), (8, 3), (16, 4), (33, 5)] {
            let s = sym_from_seed(n, seed);
            let e = symmetric_eigen(&s).unwrap();
            let back = e.reconstruct_with(|l| l);
            let err = back.sub(&s).unwrap();
            assert!(singular_values(&err).unwrap().t(0) < 1e-10, "n={n}");
            let q = e.vectors();
            let qtq = multiply(&q.transpose(), &q).unwrap();
            assert!(qtq.max_abs_diff(&Matrix::identity(n)) < 1e-10);
            let vals = e.values();
            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(symmetric_eigen(&a), Err(LinalgError::NotSymmetric { .. })));
        assert!(matches!(
            symmetric_eigen(&Matrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let e = symmetric_eigen(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values(), vec![0.0; 3]);
    }

    #[test]
    fn singular_value_examples() {
        let s = singular_values(&Matrix::from_diag(&[3.0, -2.0])).unwrap();
        assert_eq!(s.singular_values, vec![3.0, 2.0]);

        let s = singular_values(&Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]])).unwrap();
        assert_eq!(s.singular_values, vec![2.0, 0.0]);
        assert!(s.eigenvalues_symmetric.is_none());

        let (c, sn) = (0.3_f64.cos(), 0.3_f64.sin());
        let q = Matrix::from_rows(&[[c, -sn], [sn, c]]);
        for t in singular_values(&q).unwrap().singular_values {
            assert!((t - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rectangular_singular_values() {
        let a = Matrix::from_rows(&[[3.0, 0.0], [0.0, 4.0], [0.0, 0.0]]);
        assert_eq!(singular_values(&a).unwrap().singular_values, vec![4.0, 3.0]);
        let wide = a.transpose();
        assert_eq!(singular_values(&wide).unwrap().singular_values, vec![4.0, 3.0]);
    }

    #[test]
    fn psd_examples() {
        let i = Matrix::identity(3);
        let z = Matrix::zeros(3, 3);
        let w = psd_order(&i, &z, 1e-9).unwrap();
        assert!(w.holds);
        assert!((w.lhs_minus_rhs_min_eigenvalue - 1.0).abs() < 1e-15);
        let w = psd_order(&z, &i, 1e-9).unwrap();
        assert!(!w.holds);
        assert!((w.lhs_minus_rhs_min_eigenvalue + 1.0).abs() < 1e-15);
        assert!(psd_order(&i, &Matrix::identity(2), 1e-9).is_err());
    }

    #[test]
    fn inverse_sqrt_examples() {
        let i = inverse_sqrt_pd(&Matrix::identity(3)).unwrap();
        assert!(i.max_abs_diff(&Matrix::identity(3)) < 1e-15);
        let d = inverse_sqrt_pd(&Matrix::from_diag(&[4.0, 9.0])).unwrap();
        assert!(d.max_abs_diff(&Matrix::from_diag(&[0.5, 1.0 / 3.0])) < 1e-15);
        match inverse_sqrt_pd(&Matrix::from_diag(&[1.0, -0.5])) {
            Err(LinalgError::NotPositiveDefinite { eigenvalue }) => assert_eq!(eigenvalue, -0.5),
            other => panic!("{other:?}"),
        }
        assert!(inverse_sqrt_pd(&Matrix::from_diag(&[1.0, 0.0])).is_err());
    }
}
