//! Contact CR-warped product immersions into Euclidean cosymplectic space.
//!
//! Models are black-box chart maps; every extrinsic quantity is obtained by
//! finite differences, so a user-supplied immersion goes through the same
//! code path as the built-in catalog.

mod ambient;
mod calculus;
mod checks;
mod model;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use ambient::AmbientCosymplectic;
pub use calculus::{
    coordinate_hessian, point_geometry, second_fundamental_form, tangent_frame, warping_terms,
    GeomConfig, LaplacianSign, PointGeometry, TangentFrame,
};
pub use checks::{
    bound_rhs, check_cr_structure, check_dt_minimality, check_theorem_4_2, check_xi_relations,
    normal_basis, sample_grid, shape_operator, shape_operator_chart_singular_values, CrResiduals,
    EqualityDiagnostics, ShapeOperator, WarpedBoundReport, WarpedPointRecord, XiRelations,
};
pub use model::{
    builtin_models, chen_cone, circle_fiber, flat_product, holomorphic_fiber, model_by_name,
    ChartAxis, FiberMetricFn, ImmersionModel, MapFn, ScalarFn,
};

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point {value} on axis {axis} is not interior to [{lo}, {hi}] by the finite-difference margin")]
    PointOutsideChart { axis: String, value: f64, lo: f64, hi: f64 },
    #[error("degenerate immersion point (min singular value {min_singular:e})")]
    Degenerate { min_singular: f64 },
    #[error("warping function is not positive ({value}) near the sample point")]
    NonPositiveWarping { value: f64 },
    #[error("model invariant {invariant} violated at {point:?}: residual {residual:e}")]
    InvariantViolation {
        invariant: &'static str,
        residual: f64,
        point: Vec<f64>,
    },
    #[error("direction is not normal: tangential residual {tangential_residual:e}")]
    NotNormal { tangential_residual: f64 },
    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unknown model {name:?}; available: {catalog}")]
    UnknownModel { name: String, catalog: String },
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += s·x`
pub(crate) fn axpy(s: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}
