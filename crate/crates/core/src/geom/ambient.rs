use serde::Serialize;

/// Euclidean cosymplectic space `ℝ^{2m+1}`.
///
/// Coordinates are laid out as `(x₁, y₁, x₂, y₂, …, x_m, y_m, z)`. The
/// structure tensor sends `∂x_i → ∂y_i`, `∂y_i → −∂x_i`, `∂z → 0`; the Reeb
/// field is `ξ = ∂z` and `η = dz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AmbientCosymplectic {
    pub m: usize,
    /// Constant φ-sectional curvature. Only `0` has a concrete model here;
    /// other values enter the curvature term of the bound as a formula.
    pub c_c: f64,
}

impl AmbientCosymplectic {
    pub fn euclidean(m: usize) -> Self {
        assert!(m >= 1, "ambient needs m >= 1");
        Self { m, c_c: 0.0 }
    }

    pub fn dim(&self) -> usize {
        2 * self.m + 1
    }

    pub fn reeb(&self) -> Vec<f64> {
        let mut xi = vec![0.0; self.dim()];
        xi[2 * self.m] = 1.0;
        xi
    }

    pub fn eta(&self, v: &[f64]) -> f64 {
        v[2 * self.m]
    }

    /// Applies the structure tensor φ.
    pub fn phi(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![0.0; self.dim()];
        for i in 0..self.m {
            let (x, y) = (v[2 * i], v[2 * i + 1]);
            out[2 * i] = -y;
            out[2 * i + 1] = x;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize, i: usize) -> Vec<f64> {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        e
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn almost_contact_metric_identities() {
        for m in [1, 2, 3] {
            let amb = AmbientCosymplectic::euclidean(m);
            let n = amb.dim();
            let xi = amb.reeb();
            assert!(amb.phi(&xi).iter().all(|&x| x == 0.0));
            assert_eq!(amb.eta(&xi), 1.0);
            for i in 0..n {
                let e = basis(n, i);
                // φ² = −Id + η ⊗ ξ
                let phi2 = amb.phi(&amb.phi(&e));
                let expect: Vec<f64> = e
                    .iter()
                    .zip(&xi)
                    .map(|(a, x)| -a + amb.eta(&e) * x)
                    .collect();
                assert_eq!(phi2, expect);
                for j in 0..n {
                    let f = basis(n, j);
                    let lhs = dot(&amb.phi(&e), &amb.phi(&f));
                    let rhs = dot(&e, &f) - amb.eta(&e) * amb.eta(&f);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn phi_pairs_coordinates() {
        let amb = AmbientCosymplectic::euclidean(2);
        assert_eq!(amb.phi(&[1.0, 0.0, 0.0, 0.0, 0.0]), vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(amb.phi(&[0.0, 1.0, 0.0, 0.0, 0.0]), vec![-1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(amb.phi(&[0.0, 0.0, 1.0, 0.0, 0.0]), vec![0.0, 0.0, 0.0, 1.0, 0.0]);
    }
}
