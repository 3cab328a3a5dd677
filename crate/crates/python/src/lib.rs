//! Python bindings: matrices, generators, the inequality sides, the audit
//! registry and the catalog geometry checks.
//!
//! Structured results come back as dicts (through JSON) so the Python side
//! sees the same keys as the CLI reports.

use std::collections::HashMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use warpineq::geom::{self, GeomConfig, LaplacianSign};
use warpineq::ineq::{self, AuditOptions, Interpretation};
use warpineq::linalg::{self, Matrix};
use warpineq::spectra::{generate as gen_matrix, GenKind, GenSpec};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Matrix", module = "pywarpineq", skip_from_py_object)]
#[derive(Clone)]
pub struct PyMatrix {
    inner: Matrix,
}

impl From<Matrix> for PyMatrix {
    fn from(inner: Matrix) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyMatrix {
    /// Builds a matrix from a list of equal-length rows.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PyValueError::new_err("rows have different lengths"));
        }
        let m = Matrix::new(r, c, rows.concat()).map_err(err)?;
        Ok(m.into())
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Matrix::identity(n).into()
    }

    #[staticmethod]
    fn from_diag(diag: Vec<f64>) -> Self {
        Matrix::from_diag(&diag).into()
    }

    /// Parses the `rows cols` header plus row-per-line text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Matrix::from_text(text).map_err(err)?.into())
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        (0..self.inner.rows()).map(|i| self.inner.row(i).to_vec()).collect()
    }

    fn transpose(&self) -> Self {
        self.inner.transpose().into()
    }

    fn matmul(&self, other: &PyMatrix) -> PyResult<Self> {
        Ok(linalg::multiply(&self.inner, &other.inner).map_err(err)?.into())
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<Self> {
        self.matmul(other)
    }

    /// Singular values in non-increasing order.
    fn singular_values(&self) -> PyResult<Vec<f64>> {
        Ok(linalg::singular_values(&self.inner).map_err(err)?.singular_values)
    }

    fn hs_norm(&self) -> f64 {
        linalg::hs_norm(&self.inner)
    }

    fn spectral_norm(&self) -> PyResult<f64> {
        linalg::spectral_norm(&self.inner).map_err(err)
    }

    fn kyfan_norm(&self, k: usize) -> PyResult<f64> {
        linalg::kyfan_norm(&self.inner, k).map_err(err)
    }

    fn schatten_sum_norm(&self, p: f64) -> PyResult<f64> {
        linalg::schatten_sum_norm(&self.inner, p).map_err(err)
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.inner.shape();
        format!("Matrix({r}x{c})")
    }
}

/// Seeded draw from one of the named ensembles.
#[pyfunction]
#[pyo3(signature = (kind, dim, seed, params = None))]
fn generate(kind: &str, dim: usize, seed: u64, params: Option<HashMap<String, f64>>) -> PyResult<PyMatrix> {
    let kind: GenKind = kind.parse().map_err(err)?;
    let mut spec = GenSpec::new(dim, kind, seed);
    for (k, v) in params.unwrap_or_default() {
        spec = spec.with_param(&k, v);
    }
    Ok(gen_matrix(&spec).map_err(err)?.into())
}

#[pyfunction]
fn ensemble_kinds() -> Vec<&'static str> {
    GenKind::ALL.iter().map(|k| k.name()).collect()
}

#[pyfunction]
fn t010_sides<'py>(py: Python<'py>, a: &PyMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &ineq::t010_sides(&a.inner).map_err(err)?)
}

#[pyfunction]
fn c1_sides<'py>(py: Python<'py>, a: &PyMatrix) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &ineq::c1_sides(&a.inner).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (x, a, interpretation = "floor_t1"))]
fn t0_sides<'py>(py: Python<'py>, x: &PyMatrix, a: &PyMatrix, interpretation: &str) -> PyResult<Bound<'py, PyAny>> {
    let interp: Interpretation = interpretation.parse().map_err(err)?;
    to_dict(py, &ineq::t0_sides(&x.inner, &a.inner, interp).map_err(err)?)
}

#[pyfunction]
fn harmonic_inv_sqrt_bounds<'py>(py: Python<'py>, v: u64) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &ineq::harmonic_inv_sqrt_bounds(v).map_err(err)?)
}

#[pyfunction]
fn weighted_harmonic_bounds<'py>(py: Python<'py>, xs: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &ineq::weighted_harmonic_bounds(&xs).map_err(err)?)
}

#[pyfunction]
fn registry() -> Vec<&'static str> {
    ineq::registry_names()
}

/// Runs a registered check and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (check, dim_lo, dim_hi, trials, seed = 42, tol = 1e-9, interpretation = "floor_t1", artifact_dir = None))]
#[allow(clippy::too_many_arguments)]
fn run_audit<'py>(
    py: Python<'py>,
    check: &str,
    dim_lo: u64,
    dim_hi: u64,
    trials: usize,
    seed: u64,
    tol: f64,
    interpretation: &str,
    artifact_dir: Option<std::path::PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = AuditOptions {
        interpretation: interpretation.parse().map_err(err)?,
        artifact_dir,
        ..AuditOptions::default()
    };
    let report = py
        .detach(|| ineq::run_audit(check, dim_lo..=dim_hi, trials, seed, tol, &opts))
        .map_err(err)?;
    to_dict(py, &report)
}

fn geom_config(laplacian_sign: &str, geo_tol: f64) -> PyResult<GeomConfig> {
    let sign: LaplacianSign = laplacian_sign.parse().map_err(err)?;
    Ok(GeomConfig {
        laplacian_sign: sign,
        geo_tol,
        ..GeomConfig::default()
    })
}

#[pyfunction]
fn model_names() -> Vec<String> {
    geom::builtin_models().into_iter().map(|m| m.name).collect()
}

/// Bound report for a catalog model on a sample grid.
#[pyfunction]
#[pyo3(signature = (model, grid = vec![5], laplacian_sign = "divgrad", geo_tol = 1e-6))]
fn check_geometry<'py>(
    py: Python<'py>,
    model: &str,
    grid: Vec<usize>,
    laplacian_sign: &str,
    geo_tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = geom_config(laplacian_sign, geo_tol)?;
    let model = geom::model_by_name(model).map_err(err)?;
    let report = py
        .detach(|| {
            let points = geom::sample_grid(&model, &grid, &cfg)?;
            geom::check_theorem_4_2(&model, &points, &cfg)
        })
        .map_err(err)?;
    to_dict(py, &report)
}

/// Squared second fundamental form and the bound's right-hand side at one
/// chart point.
#[pyfunction]
#[pyo3(signature = (model, point, laplacian_sign = "divgrad"))]
fn point_geometry<'py>(py: Python<'py>, model: &str, point: Vec<f64>, laplacian_sign: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = geom_config(laplacian_sign, 1e-6)?;
    let model = geom::model_by_name(model).map_err(err)?;
    let pg = geom::point_geometry(&model, &point, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("point", pg.point)?;
    d.set_item("h_sq", pg.h_sq)?;
    d.set_item("grad_lnf_sq", pg.grad_lnf_sq)?;
    d.set_item("lap_lnf", pg.lap_lnf)?;
    d.set_item("rhs", pg.rhs)?;
    d.set_item("tangent_frame", pg.tangent_frame)?;
    Ok(d)
}

/// Normal directions at `point`, completed from coordinate vectors.
#[pyfunction]
fn normal_basis(model: &str, point: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let model = geom::model_by_name(model).map_err(err)?;
    geom::normal_basis(&model, &point, &GeomConfig::default()).map_err(err)
}

/// Shape operator along the unit normal `zeta`, with its singular values on
/// the block orthogonal to the Reeb direction.
#[pyfunction]
fn shape_operator<'py>(py: Python<'py>, model: &str, point: Vec<f64>, zeta: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let cfg = GeomConfig::default();
    let model = geom::model_by_name(model).map_err(err)?;
    let a = geom::shape_operator(&model, &point, &zeta, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("matrix", PyMatrix::from(a.matrix.clone()))?;
    d.set_item("singular_values", a.singular_values(true).map_err(err)?)?;
    d.set_item(
        "chart_singular_values",
        geom::shape_operator_chart_singular_values(&model, &point, &zeta, true, &cfg).map_err(err)?,
    )?;
    Ok(d)
}

#[pymodule]
fn pywarpineq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(ensemble_kinds, m)?)?;
    m.add_function(wrap_pyfunction!(t010_sides, m)?)?;
    m.add_function(wrap_pyfunction!(c1_sides, m)?)?;
    m.add_function(wrap_pyfunction!(t0_sides, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_inv_sqrt_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_harmonic_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(registry, m)?)?;
    m.add_function(wrap_pyfunction!(run_audit, m)?)?;
    m.add_function(wrap_pyfunction!(model_names, m)?)?;
    m.add_function(wrap_pyfunction!(check_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(point_geometry, m)?)?;
    m.add_function(wrap_pyfunction!(normal_basis, m)?)?;
    m.add_function(wrap_pyfunction!(shape_operator, m)?)?;
    Ok(())
}
