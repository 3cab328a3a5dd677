use super::eigen::singular_values;
use super::matrix::Matrix;
use super::LinalgError;

/// Hilbert-Schmidt (Frobenius) norm, `sqrt(Σ a_ij²)`.
pub fn hs_norm(a: &Matrix) -> f64 {
    a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Operator norm, `t_1(A)`.
pub fn spectral_norm(a: &Matrix) -> Result<f64, LinalgError> {
    Ok(singular_values(a)?.t(0))
}

/// `Σ_j t_j(A)^p`.
///
/// This is the literal sum of p-th powers, without the `1/p` root that the
/// usual Schatten norm carries. At `p = 1` the two coincide (trace norm).
pub fn schatten_sum_norm(a: &Matrix, p: f64) -> Result<f64, LinalgError> {
    if p.is_nan() || p < 1.0 {
        return Err(LinalgError::InvalidParameter(format!(
            "Schatten exponent must satisfy p >= 1, got {p}"
        )));
    }
    Ok(singular_values(a)?
        .singular_values
        .iter()
        .map(|t| t.powf(p))
        .sum())
}

/// Ky Fan k-norm: the sum of the k largest singular values.
pub fn kyfan_norm(a: &Matrix, k: usize) -> Result<f64, LinalgError> {
    let t = singular_values(a)?.singular_values;
    if k == 0 || k > t.len() {
        return Err(LinalgError::InvalidParameter(format!(
            "Ky Fan index k = {k} outside 1..={}",
            t.len()
        )));
    }
    Ok(t[..k].iter().sum())
}
