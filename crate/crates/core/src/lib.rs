//! Numerical audits for second-fundamental-form bounds on contact
//! CR-warped products in Euclidean cosymplectic space and for harmonic-series
//! bounds on shape-operator matrices.
//!
//! * [`linalg`]: dense real linear algebra (Jacobi eigen/singular values, norms).
//! * [`spectra`]: seeded random matrix ensembles.
//! * [`ineq`]: both sides of each matrix inequality and the audit runner.
//! * [`geom`]: explicit immersions and their extrinsic invariants.

pub mod linalg;
pub mod spectra;
pub mod ineq;
pub mod geom;
