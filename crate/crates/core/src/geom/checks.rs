use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{inverse_sqrt_pd, multiply, symmetric_eigen, Matrix};

use super::calculus::{
    coordinate_hessian, frame_h, point_geometry, tangent_frame, GeomConfig, LaplacianSign,
};
use super::model::ImmersionModel;
use super::{axpy, dot, norm, GeomError};

/// Right side of the warped-product bound:
/// `2·n₂·(‖∇ln f‖² − Δ ln f + (n₁−1)·c/4)`.
pub fn bound_rhs(n1: usize, n2: usize, grad_lnf_sq: f64, lap_lnf: f64, c_c: f64) -> f64 {
    2.0 * n2 as f64 * (grad_lnf_sq - lap_lnf + (n1 as f64 - 1.0) * c_c / 4.0)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CrResiduals {
    /// `φ(𝒟_T) ⊆ 𝒟_T`
    pub dt_invariance_residual: f64,
    /// `⟨φ(𝒟_⊥), TM⟩ = 0`
    pub dperp_antiinvariance_residual: f64,
    /// Off-block entries of the induced metric.
    pub metric_block_residual: f64,
    /// `|g_⊥ − f²·g₂|`
    pub warp_factor_residual: f64,
    /// `|∂F/∂u_ξ − ξ|`
    pub xi_residual: f64,
}

impl CrResiduals {
    fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("dt_invariance", self.dt_invariance_residual),
            ("dperp_antiinvariance", self.dperp_antiinvariance_residual),
            ("metric_block", self.metric_block_residual),
            ("warp_factor", self.warp_factor_residual),
            ("xi_tangent", self.xi_residual),
        ]
    }

    pub fn max(&self) -> f64 {
        self.named().iter().map(|&(_, r)| r).fold(0.0, f64::max)
    }

    /// First residual above `tol`, if any.
    pub fn violated(&self, tol: f64) -> Option<(&'static str, f64)> {
        self.named().into_iter().find(|&(_, r)| !(r <= tol))
    }

    fn merge(self, o: Self) -> Self {
        Self {
            dt_invariance_residual: self.dt_invariance_residual.max(o.dt_invariance_residual),
            dperp_antiinvariance_residual: self.dperp_antiinvariance_residual.max(o.dperp_antiinvariance_residual),
            metric_block_residual: self.metric_block_residual.max(o.metric_block_residual),
            warp_factor_residual: self.warp_factor_residual.max(o.warp_factor_residual),
            xi_residual: self.xi_residual.max(o.xi_residual),
        }
    }
}

fn cr_residuals_at(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<CrResiduals, GeomError> {
    let fr = tangent_frame(model, p, cfg)?;
    let amb = &model.ambient;
    let (n1, n) = (model.n1, model.n());

    let mut dt = 0.0f64;
    for e in &fr.frame[..n1] {
        let mut v = amb.phi(e);
        for f in &fr.frame[..n1] {
            let c = dot(&v, f);
            axpy(-c, f, &mut v);
        }
        dt = dt.max(norm(&v));
    }

    let mut dperp = 0.0f64;
    for e in &fr.frame[n1..] {
        let v = amb.phi(e);
        for f in &fr.frame {
            dperp = dperp.max(dot(&v, f).abs());
        }
    }

    let g = &fr.metric;
    let mut block = 0.0f64;
    for i in 0..n1 {
        for a in n1..n {
            block = block.max(g.get(i, a).abs());
        }
    }

    let f = model.warping_at(p);
    let g2 = model.fiber_metric_at(p);
    let mut warp = 0.0f64;
    for a in 0..model.n2 {
        for b in 0..model.n2 {
            warp = warp.max((g.get(n1 + a, n1 + b) - f * f * g2.get(a, b)).abs());
        }
    }

    let xi_col = fr.jacobian.column(model.xi_index);
    let xi_res = norm(&xi_col.iter().zip(amb.reeb()).map(|(a, b)| a - b).collect::<Vec<_>>());

    Ok(CrResiduals {
        dt_invariance_residual: dt,
        dperp_antiinvariance_residual: dperp,
        metric_block_residual: block,
        warp_factor_residual: warp,
        xi_residual: xi_res,
    })
}

/// Worst structure residuals over the sample points.
pub fn check_cr_structure(model: &ImmersionModel, points: &[Vec<f64>], cfg: &GeomConfig) -> Result<CrResiduals, GeomError> {
    let per: Vec<CrResiduals> = points
        .par_iter()
        .map(|p| cr_residuals_at(model, p, cfg))
        .collect::<Result<_, _>>()?;
    Ok(per.into_iter().fold(CrResiduals::default(), CrResiduals::merge))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarpedPointRecord {
    pub point: Vec<f64>,
    pub h_sq: f64,
    pub grad_lnf_sq: f64,
    pub lap_lnf: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Indicators for the equality case: `N_T` totally geodesic, `N_⊥` totally
/// umbilical, `M` minimal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EqualityDiagnostics {
    pub h_dt_norm_max: f64,
    pub dperp_umbilicity_max: f64,
    pub trace_h_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WarpedBoundReport {
    pub model: String,
    pub n1: usize,
    pub n2: usize,
    pub c_c: f64,
    pub laplacian_sign: LaplacianSign,
    pub geo_tol: f64,
    pub records: Vec<WarpedPointRecord>,
    pub min_margin: f64,
    pub max_abs_margin: f64,
    pub holds: bool,
    pub equality: bool,
    /// Present only when `equality` is set.
    pub equality_diagnostics: Option<EqualityDiagnostics>,
    pub cr_residuals: CrResiduals,
}

fn equality_diagnostics_at(h: &[Vec<Vec<f64>>], n1: usize) -> EqualityDiagnostics {
    let n = h.len();
    let dim = h[0][0].len();
    let h_dt: f64 = (0..n1)
        .flat_map(|r| (0..n1).map(move |s| (r, s)))
        .map(|(r, s)| dot(&h[r][s], &h[r][s]))
        .sum::<f64>()
        .sqrt();

    let n2 = n - n1;
    let mut mean = vec![0.0; dim];
    for a in n1..n {
        axpy(1.0 / n2 as f64, &h[a][a], &mut mean);
    }
    let mut umb = 0.0;
    for a in n1..n {
        for b in n1..n {
            let mut d = h[a][b].clone();
            if a == b {
                axpy(-1.0, &mean, &mut d);
            }
            umb += dot(&d, &d);
        }
    }

    let mut trace = vec![0.0; dim];
    for (r, row) in h.iter().enumerate() {
        axpy(1.0, &row[r], &mut trace);
    }
    EqualityDiagnostics {
        h_dt_norm_max: h_dt,
        dperp_umbilicity_max: umb.sqrt(),
        trace_h_max: norm(&trace),
    }
}

/// Evaluates `‖h‖² ≥ rhs` at each point after verifying the model's
/// structure there. A structure failure is an error, not a violation.
pub fn check_theorem_4_2(model: &ImmersionModel, points: &[Vec<f64>], cfg: &GeomConfig) -> Result<WarpedBoundReport, GeomError> {
    if points.is_empty() {
        return Err(GeomError::BadGrid("no sample points".into()));
    }
    let per: Vec<(CrResiduals, WarpedPointRecord, EqualityDiagnostics)> = points
        .par_iter()
        .map(|p| {
            let cr = cr_residuals_at(model, p, cfg)?;
            if let Some((invariant, residual)) = cr.violated(cfg.metric_tol) {
                return Err(GeomError::InvariantViolation {
                    invariant,
                    residual,
                    point: p.clone(),
                });
            }
            let pg = point_geometry(model, p, cfg)?;
            let rhs = pg.rhs.expect("point_geometry fills rhs");
            let rec = WarpedPointRecord {
                point: p.clone(),
                h_sq: pg.h_sq,
                grad_lnf_sq: pg.grad_lnf_sq.expect("filled"),
                lap_lnf: pg.lap_lnf.expect("filled"),
                rhs,
                margin: pg.h_sq - rhs,
            };
            Ok((cr, rec, equality_diagnostics_at(&pg.h, model.n1)))
        })
        .collect::<Result<_, GeomError>>()?;

    let mut cr = CrResiduals::default();
    let mut diag = EqualityDiagnostics::default();
    let mut records = Vec::with_capacity(per.len());
    for (c, r, d) in per {
        cr = cr.merge(c);
        diag.h_dt_norm_max = diag.h_dt_norm_max.max(d.h_dt_norm_max);
        diag.dperp_umbilicity_max = diag.dperp_umbilicity_max.max(d.dperp_umbilicity_max);
        diag.trace_h_max = diag.trace_h_max.max(d.trace_h_max);
        records.push(r);
    }
    let min_margin = records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let max_abs_margin = records.iter().map(|r| r.margin.abs()).fold(0.0, f64::max);
    let holds = min_margin >= -cfg.geo_tol;
    let equality = max_abs_margin < cfg.geo_tol;
    Ok(WarpedBoundReport {
        model: model.name.clone(),
        n1: model.n1,
        n2: model.n2,
        c_c: model.ambient.c_c,
        laplacian_sign: cfg.laplacian_sign,
        geo_tol: cfg.geo_tol,
        records,
        min_margin,
        max_abs_margin,
        holds,
        equality,
        equality_diagnostics: equality.then_some(diag),
        cr_residuals: cr,
    })
}

fn h_at(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<Vec<Vec<Vec<f64>>>, GeomError> {
    let fr = tangent_frame(model, p, cfg)?;
    let hess = coordinate_hessian(model, p, cfg.fd2)?;
    Ok(frame_h(&fr, &hess))
}

/// `max_p |Σ_{i<n₁} h(ê_i, ê_i)|`
pub fn check_dt_minimality(model: &ImmersionModel, points: &[Vec<f64>], cfg: &GeomConfig) -> Result<f64, GeomError> {
    let per: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let h = h_at(model, p, cfg)?;
            let mut tr = vec![0.0; model.ambient.dim()];
            for i in 0..model.n1 {
                axpy(1.0, &h[i][i], &mut tr);
            }
            Ok(norm(&tr))
        })
        .collect::<Result<_, GeomError>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiRelations {
    pub h_xi_xi_max: f64,
}

pub fn check_xi_relations(model: &ImmersionModel, points: &[Vec<f64>], cfg: &GeomConfig) -> Result<XiRelations, GeomError> {
    let per: Vec<f64> = points
        .par_iter()
        .map(|p| {
            let h = h_at(model, p, cfg)?;
            Ok(norm(&h[model.xi_index][model.xi_index]))
        })
        .collect::<Result<_, GeomError>>()?;
    Ok(XiRelations {
        h_xi_xi_max: per.into_iter().fold(0.0, f64::max),
    })
}

#[derive(Clone, Debug)]
pub struct ShapeOperator {
    pub point: Vec<f64>,
    pub normal_direction: Vec<f64>,
    /// `⟨A_ζ ê_r, ê_s⟩` in the chart-ordered frame.
    pub matrix: Matrix,
    pub xi_index: usize,
}

impl ShapeOperator {
    /// The block orthogonal to `ξ̂`, of size `n − 1`.
    pub fn xi_orthogonal_block(&self) -> Matrix {
        self.matrix.without_index(self.xi_index)
    }

    /// `t_j = |λ_j|` of the symmetrised matrix (or its `ξ`-orthogonal block),
    /// decreasing. Going through `AᵀA` would cap small values at `√ε`
    /// accuracy.
    pub fn singular_values(&self, xi_block: bool) -> Result<Vec<f64>, GeomError> {
        let m = if xi_block { self.xi_orthogonal_block() } else { self.matrix.clone() };
        let mut sv: Vec<f64> = symmetric_eigen(&m.symmetrized())?.values().into_iter().map(f64::abs).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        Ok(sv)
    }
}

fn check_normal(fr: &super::TangentFrame, zeta: &[f64], cfg: &GeomConfig) -> Result<(), GeomError> {
    if zeta.len() != fr.jacobian.rows() {
        return Err(GeomError::InvalidModel(format!(
            "normal direction has {} components, ambient has {}",
            zeta.len(),
            fr.jacobian.rows()
        )));
    }
    let len = norm(zeta);
    if !((len - 1.0).abs() <= cfg.proj_tol) {
        return Err(GeomError::NotUnit { norm: len });
    }
    let t = fr.tangential_residual(zeta);
    if !(t <= cfg.proj_tol) {
        return Err(GeomError::NotNormal { tangential_residual: t });
    }
    Ok(())
}

pub fn shape_operator(model: &ImmersionModel, p: &[f64], zeta: &[f64], cfg: &GeomConfig) -> Result<ShapeOperator, GeomError> {
    let fr = tangent_frame(model, p, cfg)?;
    check_normal(&fr, zeta, cfg)?;
    let hess = coordinate_hessian(model, p, cfg.fd2)?;
    let h = frame_h(&fr, &hess);
    let n = model.n();
    let mut m = Matrix::zeros(n, n);
    for r in 0..n {
        for s in 0..n {
            m.set(r, s, dot(&h[r][s], zeta));
        }
    }
    Ok(ShapeOperator {
        point: p.to_vec(),
        normal_direction: zeta.to_vec(),
        matrix: m,
        xi_index: model.xi_index,
    })
}

/// Orthonormal basis of the normal space at `p`, completed from the ambient
/// coordinate vectors.
pub fn normal_basis(model: &ImmersionModel, p: &[f64], cfg: &GeomConfig) -> Result<Vec<Vec<f64>>, GeomError> {
    let fr = tangent_frame(model, p, cfg)?;
    let dim = model.ambient.dim();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(dim - model.n());
    for k in 0..dim {
        if out.len() == dim - model.n() {
            break;
        }
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let mut w = fr.normal_part(&e);
        for q in &out {
            let c = dot(&w, q);
            axpy(-c, q, &mut w);
        }
        let len = norm(&w);
        if len > 1e-3 {
            out.push(w.into_iter().map(|x| x / len).collect());
        }
    }
    Ok(out)
}

/// Singular values of `A_ζ` assembled in chart coordinates, independent of
/// the orthonormal frame: eigenvalues of `g^{-1/2} B g^{-1/2}` with
/// `B_ij = ⟨∂²F/∂u_i∂u_j, ζ⟩`. With `xi_block` the operator is compressed to
/// `ξ^⊥ ∩ TM`, matching [`ShapeOperator::xi_orthogonal_block`].
pub fn shape_operator_chart_singular_values(
    model: &ImmersionModel,
    p: &[f64],
    zeta: &[f64],
    xi_block: bool,
    cfg: &GeomConfig,
) -> Result<Vec<f64>, GeomError> {
    let fr = tangent_frame(model, p, cfg)?;
    check_normal(&fr, zeta, cfg)?;
    let zn = fr.normal_part(zeta);
    let hess = coordinate_hessian(model, p, cfg.fd2)?;
    let n = model.n();
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, dot(&hess[i][j], &zn));
        }
    }
    let mut g = fr.metric.clone();
    if xi_block {
        // Columns e_i − (g_iξ/g_ξξ)·e_ξ span the coordinate image of ξ^⊥.
        let x = model.xi_index;
        let cols: Vec<Vec<f64>> = (0..n)
            .filter(|&i| i != x)
            .map(|i| {
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                c[x] = -g.get(i, x) / g.get(x, x);
                c
            })
            .collect();
        let pm = Matrix::from_columns(&cols);
        let pt = pm.transpose();
        b = multiply(&multiply(&pt, &b)?, &pm)?;
        g = multiply(&multiply(&pt, &g)?, &pm)?;
    }
    let w = inverse_sqrt_pd(&g.symmetrized())?;
    let s = multiply(&multiply(&w, &b)?, &w)?.symmetrized();
    let mut sv: Vec<f64> = symmetric_eigen(&s)?.values().into_iter().map(f64::abs).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Regular grid inside the chart box, inset from each face by four
/// second-derivative steps. `counts` holds one entry per axis, or a single
/// entry applied to all axes. The first axis varies slowest.
pub fn sample_grid(model: &ImmersionModel, counts: &[usize], cfg: &GeomConfig) -> Result<Vec<Vec<f64>>, GeomError> {
    let n = model.n();
    let counts: Vec<usize> = match counts.len() {
        1 => vec![counts[0]; n],
        k if k == n => counts.to_vec(),
        k => return Err(GeomError::BadGrid(format!("{k} grid counts for a {n}-dimensional chart"))),
    };
    if counts.contains(&0) {
        return Err(GeomError::BadGrid("grid counts must be positive".into()));
    }
    let ticks: Vec<Vec<f64>> = model
        .chart
        .iter()
        .zip(&counts)
        .map(|(a, &c)| {
            let inset = 4.0 * cfg.fd2 * a.scale;
            let (lo, hi) = (a.lo + inset, a.hi - inset);
            if c == 1 {
                vec![0.5 * (lo + hi)]
            } else {
                (0..c).map(|k| lo + (hi - lo) * k as f64 / (c - 1) as f64).collect()
            }
        })
        .collect();
    let mut points = vec![Vec::with_capacity(n)];
    for t in &ticks {
        points = points
            .into_iter()
            .flat_map(|p| {
                t.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}
