use serde::Serialize;

use crate::linalg::{inverse_with_det, singular_values, Matrix};

use super::model::ImmersionModel;
use super::{axpy, dot, norm, GeomError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianSign {
    /// Divergence of the gradient; `Δ ln r = 0` in the plane.
    DivGrad,
    /// The geometers' positive operator `−div grad`.
    Negative,
}

impl LaplacianSign {
    pub fn name(self) -> &'static str {
        match self {
            LaplacianSign::DivGrad => "divgrad",
            LaplacianSign::Negative => "negative",
        }
    }
}

impl std::str::FromStr for LaplacianSign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "divgrad" => Ok(LaplacianSign::DivGrad),
            "negative" => Ok(LaplacianSign::Negative),
            other => Err(format!("unknown Laplacian sign {other:?} (expected divgrad or negative)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeomConfig {
    /// First-derivative step per unit axis scale.
    pub fd1: f64,
    /// Second-derivative step per unit axis scale.
    pub fd2: f64,
    pub proj_tol: f64,
    pub metric_tol: f64,
    pub geo_tol: f64,
    /// Minimum singular value of the Jacobian.
    pub rank_tol: f64,
    pub laplacian_sign: LaplacianSign,
}

impl Default for GeomConfig {
    fn default() -> Self {
        Self {
            fd1: 1e-6,
            fd2: 1e-4,
            proj_tol: 1e-8,
            metric_tol: 1e-7,
            geo_tol: 1e-6,
            rank_tol: 1e-8,
            laplacian_sign: LaplacianSign::DivGrad,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentFrame {
    /// `(2m+1) × n`, column `i` is `∂F/∂u_i`.
    pub jacobian: Matrix,
    /// Orthonormal frame in chart order; the first `n1` span `𝒟_T`.
    pub frame: Vec<Vec<f64>>,
    /// Column `r` holds the chart components of `frame[r]`.
    pub coeffs: Matrix,
    /// Induced metric `JᵀJ` in chart coordinates.
    pub metric: Matrix,
}

impl TangentFrame {
    /// Normal component of an ambient vector.
    pub fn normal_part(&self, w: &[f64]) -> Vec<f64> {
        let mut out = w.to_vec();
        for e in &self.frame {
            let c = dot(&out, e);
            axpy(-c, e, &mut out);
        }
        out
    }

    /// Largest tangential component of `w` against the frame.
    pub fn tangential_residual(&self, w: &[f64]) -> f64 {
        let t: Vec<f64> = self.frame.iter().map(|e| dot(w, e)).collect();
        norm(&t)
    }
}

#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub point: Vec<f64>,
    pub tangent_frame: Vec<Vec<f64>>,
    pub metric: Matrix,
    /// `h[r][s]` is the ambient normal vector `h(ê_r, ê_s)`.
    pub h: Vec<Vec<Vec<f64>>>,
    pub h_sq: f64,
    pub grad_lnf_sq: Option<f64>,
    pub lap_lnf: Option<f64>,
    pub rhs: Option<f64>,
}

pub(crate) fn check_interior(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<(), GeomError> {
    if p.len() != model.n() {
        return Err(GeomError::InvalidModel(format!(
            "point has {} coordinates, chart has {}",
            p.len(),
            model.n()
        )));
    }
    for (a, &x) in model.chart.iter().zip(p) {
        // The Laplacian reaches two second-derivative steps out.
        let margin = 2.0 * cfg.fd2 * a.scale * (1.0 - 1e-9);
        if !(x >= a.lo + margin && x <= a.hi - margin) {
            return Err(GeomError::PointOutsideChart {
                axis: a.name.clone(),
                value: x,
                lo: a.lo,
                hi: a.hi,
            });
        }
    }
    Ok(())
}

/// `p ± h·e_i` plus the realised spacing between the two points.
fn straddle(p: &[f64], i: usize, h: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let mut plus = p.to_vec();
    let mut minus = p.to_vec();
    plus[i] += h;
    minus[i] -= h;
    let d = plus[i] - minus[i];
    (plus, minus, d)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn central(model: &ImmersionModel, p: &[f64], i: usize, h: f64) -> Result<Vec<f64>, GeomError> {
    let (plus, minus, d) = straddle(p, i, h);
    let diff = sub(&model.eval(&plus)?, &model.eval(&minus)?);
    Ok(diff.into_iter().map(|x| x / d).collect())
}

/// Richardson-extrapolated central-difference Jacobian at step `step × scale`.
pub(crate) fn jacobian(model: &ImmersionModel, p: &[f64], step: f64) -> Result<Matrix, GeomError> {
    let cols = model
        .chart
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let h = step * a.scale;
            let coarse = central(model, p, i, h)?;
            let fine = central(model, p, i, 0.5 * h)?;
            Ok(fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect())
        })
        .collect::<Result<Vec<Vec<f64>>, GeomError>>()?;
    Ok(Matrix::from_columns(&cols))
}

fn gram(j: &Matrix) -> Matrix {
    let n = j.cols();
    let cols: Vec<Vec<f64>> = (0..n).map(|i| j.column(i)).collect();
    let mut g = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = dot(&cols[a], &cols[b]);
            g.set(a, b, v);
            g.set(b, a, v);
        }
    }
    g
}

pub fn tangent_frame(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<TangentFrame, GeomError> {
    check_interior(model, p, cfg)?;
    let jac = jacobian(model, p, cfg.fd1)?;
    let min_sv = singular_values(&jac)?.singular_values.last().copied().unwrap_or(0.0);
    if min_sv < cfg.rank_tol {
        return Err(GeomError::Degenerate { min_singular: min_sv });
    }

    let n = model.n();
    let order: Vec<usize> = std::iter::once(model.xi_index)
        .chain((0..model.n1).filter(|&i| i != model.xi_index))
        .chain(model.n1..n)
        .collect();

    let mut frame = vec![Vec::new(); n];
    let mut coeffs = Matrix::zeros(n, n);
    let mut done: Vec<usize> = Vec::with_capacity(n);
    for &i in &order {
        let mut w = jac.column(i);
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        for &r in &done {
            let d = dot(&w, &frame[r]);
            axpy(-d, &frame[r], &mut w);
            for (k, ck) in c.iter_mut().enumerate() {
                *ck -= d * coeffs.get(k, r);
            }
        }
        let len = norm(&w);
        if len < cfg.rank_tol {
            return Err(GeomError::Degenerate { min_singular: len });
        }
        frame[i] = w.into_iter().map(|x| x / len).collect();
        for (k, ck) in c.iter().enumerate() {
            coeffs.set(k, i, ck / len);
        }
        done.push(i);
    }

    let metric = gram(&jac);
    Ok(TangentFrame {
        jacobian: jac,
        frame,
        coeffs,
        metric,
    })
}

/// `∂²F/∂u_i∂u_j` by second-order central differences at `step × scale`.
pub fn coordinate_hessian(model: &ImmersionModel, p: &[f64], step: f64) -> Result<Vec<Vec<Vec<f64>>>, GeomError> {
    let n = model.n();
    let hs: Vec<f64> = model.chart.iter().map(|a| step * a.scale).collect();
    let f0 = model.eval(p)?;
    let mut out = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        let (plus, minus, _) = straddle(p, i, hs[i]);
        let (ha, hb) = (plus[i] - p[i], p[i] - minus[i]);
        let (fp, fm) = (model.eval(&plus)?, model.eval(&minus)?);
        out[i][i] = (0..f0.len())
            .map(|k| 2.0 * ((fp[k] - f0[k]) / ha - (f0[k] - fm[k]) / hb) / (ha + hb))
            .collect();
        for j in (i + 1)..n {
            let corner = |si: f64, sj: f64| -> Result<Vec<f64>, GeomError> {
                let mut q = p.to_vec();
                q[i] += si * hs[i];
                q[j] += sj * hs[j];
                model.eval(&q)
            };
            let (pp, pm, mp, mm) = (corner(1.0, 1.0)?, corner(1.0, -1.0)?, corner(-1.0, 1.0)?, corner(-1.0, -1.0)?);
            let di = (p[i] + hs[i]) - (p[i] - hs[i]);
            let dj = (p[j] + hs[j]) - (p[j] - hs[j]);
            let v: Vec<f64> = (0..f0.len())
                .map(|k| (pp[k] - pm[k] - mp[k] + mm[k]) / (di * dj))
                .collect();
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    Ok(out)
}

/// Normal projections of the coordinate second derivatives, re-expressed in
/// the orthonormal frame.
pub(crate) fn frame_h(frame: &TangentFrame, hess: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    let n = frame.frame.len();
    let dim = frame.jacobian.rows();
    let normal: Vec<Vec<Vec<f64>>> = hess
        .iter()
        .map(|row| row.iter().map(|v| frame.normal_part(v)).collect())
        .collect();
    let mut h = vec![vec![vec![0.0; dim]; n]; n];
    for r in 0..n {
        for s in r..n {
            let mut acc = vec![0.0; dim];
            for i in 0..n {
                let ci = frame.coeffs.get(i, r);
                if ci == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let cj = frame.coeffs.get(j, s);
                    if cj != 0.0 {
                        axpy(ci * cj, &normal[i][j], &mut acc);
                    }
                }
            }
            h[s][r] = acc.clone();
            h[r][s] = acc;
        }
    }
    h
}

pub(crate) fn squared_norm(h: &[Vec<Vec<f64>>]) -> f64 {
    h.iter().flatten().map(|v| dot(v, v)).sum()
}

pub fn second_fundamental_form(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<PointGeometry, GeomError> {
    let frame = tangent_frame(model, p, cfg)?;
    let hess = coordinate_hessian(model, p, cfg.fd2)?;
    let h = frame_h(&frame, &hess);
    let h_sq = squared_norm(&h);
    Ok(PointGeometry {
        point: p.to_vec(),
        tangent_frame: frame.frame,
        metric: frame.metric,
        h,
        h_sq,
        grad_lnf_sq: None,
        lap_lnf: None,
        rhs: None,
    })
}

fn ln_warping(model: &ImmersionModel, q: &[f64]) -> Result<f64, GeomError> {
    let f = model.warping_at(q);
    if f > 0.0 && f.is_finite() {
        Ok(f.ln())
    } else {
        Err(GeomError::NonPositiveWarping { value: f })
    }
}

fn chart_gradient(model: &ImmersionModel, q: &[f64], step: f64) -> Result<Vec<f64>, GeomError> {
    (0..model.n1)
        .map(|j| {
            let (plus, minus, d) = straddle(q, j, step * model.chart[j].scale);
            Ok((ln_warping(model, &plus)? - ln_warping(model, &minus)?) / d)
        })
        .collect()
}

/// `g₁` and its inverse and determinant. The Jacobian here uses the
/// second-derivative step: it is differenced again by the divergence, and
/// the smaller first-derivative step would amplify rounding noise.
fn first_factor_metric(model: &ImmersionModel, q: &[f64], step: f64) -> Result<(Matrix, Matrix, f64), GeomError> {
    let jac = jacobian(model, q, step)?;
    let n1 = model.n1;
    let cols: Vec<Vec<f64>> = (0..n1).map(|i| jac.column(i)).collect();
    let g1 = gram(&Matrix::from_columns(&cols));
    let (inv, det) = inverse_with_det(&g1)?;
    if !(det > 0.0) {
        return Err(GeomError::Degenerate { min_singular: det.max(0.0).sqrt() });
    }
    Ok((g1, inv, det))
}

fn flux(model: &ImmersionModel, q: &[f64], step: f64) -> Result<Vec<f64>, GeomError> {
    let (_, inv, det) = first_factor_metric(model, q, step)?;
    let grad = chart_gradient(model, q, step)?;
    let root = det.sqrt();
    Ok(inv.mat_vec(&grad).into_iter().map(|x| root * x).collect())
}

fn warping_terms_at(model: &ImmersionModel, p: &[f64], step: f64) -> Result<(f64, f64), GeomError> {
    let (_, inv, det) = first_factor_metric(model, p, step)?;
    let grad = chart_gradient(model, p, step)?;
    let grad_sq = dot(&grad, &inv.mat_vec(&grad));

    let mut div = 0.0;
    for i in 0..model.n1 {
        let (plus, minus, d) = straddle(p, i, step * model.chart[i].scale);
        div += (flux(model, &plus, step)?[i] - flux(model, &minus, step)?[i]) / d;
    }
    Ok((grad_sq, div / det.sqrt()))
}

/// `(‖∇ ln f‖², Δ ln f)` on `N_T`: nested central differences at the
/// second-derivative step and half of it, Richardson-combined.
pub fn warping_terms(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<(f64, f64), GeomError> {
    check_interior(model, p, cfg)?;
    let (g_coarse, l_coarse) = warping_terms_at(model, p, cfg.fd2)?;
    let (g_fine, l_fine) = warping_terms_at(model, p, 0.5 * cfg.fd2)?;
    let grad_sq = (4.0 * g_fine - g_coarse) / 3.0;
    let lap = (4.0 * l_fine - l_coarse) / 3.0;
    let lap = match cfg.laplacian_sign {
        LaplacianSign::DivGrad => lap,
        LaplacianSign::Negative => -lap,
    };
    Ok((grad_sq, lap))
}

/// Full pointwise record: `h`, warping terms and the bound's right side.
pub fn point_geometry(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<PointGeometry, GeomError> {
    let mut pg = second_fundamental_form(model, p, cfg)?;
    let (grad_sq, lap) = warping_terms(model, p, cfg)?;
    pg.grad_lnf_sq = Some(grad_sq);
    pg.lap_lnf = Some(lap);
    pg.rhs = Some(super::checks::bound_rhs(model.n1, model.n2, grad_sq, lap, model.ambient.c_c));
    Ok(pg)
}
