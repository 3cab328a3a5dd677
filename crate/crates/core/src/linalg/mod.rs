//! Dense real linear algebra: products, Jacobi eigen/singular values, the
//! norms used by the matrix inequalities, direct sums and the Loewner order.

mod eigen;
mod matrix;
mod norms;
mod text;

pub use eigen::{
    inverse_sqrt_pd, psd_order, singular_values, symmetric_eigen, EigenPair, PsdOrderWitness,
    SpectralSummary, SymmetricEigen, MAX_SWEEPS, OFF_DIAGONAL_REL_TOL,
};
pub use matrix::{adjoint, direct_sum, inverse_with_det, is_doubly_stochastic, multiply, Matrix};
pub use norms::{hs_norm, kyfan_norm, schatten_sum_norm, spectral_norm};
pub use text::format_g17;

/// Relative asymmetry accepted by routines that require symmetric input.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;
/// Smallest eigenvalue still treated as positive definite.
pub const PD_FLOOR: f64 = 1e-10;
/// Default slack for Loewner-order comparisons.
pub const ORDER_TOL: f64 = 1e-9;
/// Residual bound for decompositions.
pub const DECOMPOSITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {}x{} vs {}x{}", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {}x{}", shape.0, shape.1)]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix needs at least one row and column, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    EntryCount { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },
    #[error("matrix is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
