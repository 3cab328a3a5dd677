use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::linalg::Matrix;

use super::ambient::AmbientCosymplectic;
use super::GeomError;

pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type FiberMetricFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartAxis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    /// Length unit for finite-difference steps along this axis.
    pub scale: f64,
}

impl ChartAxis {
    pub fn new(name: &str, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            lo,
            hi,
            scale: 1.0,
        }
    }
}

/// Parametrised warped product `N_T ×_f N_⊥ → ℝ^{2m+1}`.
///
/// Chart coordinates list the `n1` coordinates of `N_T` (one of which,
/// `xi_index`, maps to the Reeb direction) followed by the `n2` coordinates
/// of `N_⊥`. The warping function takes the `N_T` coordinates; the fibre
/// metric takes the `N_⊥` coordinates.
#[derive(Clone)]
pub struct ImmersionModel {
    pub name: String,
    pub ambient: AmbientCosymplectic,
    pub n1: usize,
    pub n2: usize,
    pub chart: Vec<ChartAxis>,
    pub xi_index: usize,
    map: MapFn,
    warping: ScalarFn,
    fiber_metric: Option<FiberMetricFn>,
}

impl fmt::Debug for ImmersionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersionModel")
            .field("name", &self.name)
            .field("ambient", &self.ambient)
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .field("chart", &self.chart)
            .field("xi_index", &self.xi_index)
            .finish_non_exhaustive()
    }
}

impl ImmersionModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        ambient: AmbientCosymplectic,
        n1: usize,
        n2: usize,
        chart: Vec<ChartAxis>,
        xi_index: usize,
        map: MapFn,
        warping: ScalarFn,
    ) -> Result<Self, GeomError> {
        let invalid = |msg: String| Err(GeomError::InvalidModel(msg));
        if n1 < 1 || n2 < 1 {
            return invalid(format!("need n1 >= 1 and n2 >= 1, got {n1} and {n2}"));
        }
        if chart.len() != n1 + n2 {
            return invalid(format!("chart has {} axes, expected n1 + n2 = {}", chart.len(), n1 + n2));
        }
        if xi_index >= n1 {
            return invalid(format!("xi_index {xi_index} must address an N_T coordinate (< {n1})"));
        }
        if n1 + n2 > ambient.dim() {
            return invalid(format!(
                "dimension {} exceeds ambient dimension {}",
                n1 + n2,
                ambient.dim()
            ));
        }
        if let Some(a) = chart.iter().find(|a| !(a.lo < a.hi && a.scale > 0.0)) {
            return invalid(format!("axis {} has an empty box or non-positive scale", a.name));
        }
        Ok(Self {
            name: name.to_string(),
            ambient,
            n1,
            n2,
            chart,
            xi_index,
            map,
            warping,
            fiber_metric: None,
        })
    }

    /// Reference metric `g₂` of `N_⊥`; identity when unset.
    pub fn with_fiber_metric(mut self, g2: FiberMetricFn) -> Self {
        self.fiber_metric = Some(g2);
        self
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn eval(&self, u: &[f64]) -> Result<Vec<f64>, GeomError> {
        let p = (self.map)(u);
        if p.len() != self.ambient.dim() {
            return Err(GeomError::InvalidModel(format!(
                "map returned {} components, ambient has {}",
                p.len(),
                self.ambient.dim()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(GeomError::InvalidModel(format!("map is not finite at {u:?}")));
        }
        Ok(p)
    }

    /// Warping function at the `N_T` part of chart point `u`.
    pub fn warping_at(&self, u: &[f64]) -> f64 {
        (self.warping)(&u[..self.n1])
    }

    pub fn fiber_metric_at(&self, u: &[f64]) -> Matrix {
        match &self.fiber_metric {
            Some(g) => g(&u[self.n1..]),
            None => Matrix::identity(self.n2),
        }
    }

    pub fn chart_center(&self) -> Vec<f64> {
        self.chart.iter().map(|a| 0.5 * (a.lo + a.hi)).collect()
    }
}

fn axes(spec: &[(&str, f64, f64)]) -> Vec<ChartAxis> {
    spec.iter().map(|&(n, lo, hi)| ChartAxis::new(n, lo, hi)).collect()
}

/// `F(x, y, z, t) = (x, y, t, 0, z)`, `f ≡ 1`: totally geodesic.
pub fn flat_product() -> ImmersionModel {
    ImmersionModel::new(
        "flat-product",
        AmbientCosymplectic::euclidean(2),
        3,
        1,
        axes(&[("x", -1.0, 1.0), ("y", -1.0, 1.0), ("z", -1.0, 1.0), ("t", -1.0, 1.0)]),
        2,
        Arc::new(|u: &[f64]| vec![u[0], u[1], u[3], 0.0, u[2]]),
        Arc::new(|_: &[f64]| 1.0),
    )
    .expect("valid catalog model")
}

/// `F(x, y, z, t) = (x cos t, y cos t, x sin t, y sin t, z)`,
/// `f = √(x² + y²)`: both sides of the bound equal `2/r²`.
pub fn chen_cone() -> ImmersionModel {
    ImmersionModel::new(
        "chen-cone",
        AmbientCosymplectic::euclidean(2),
        3,
        1,
        axes(&[("x", 0.5, 2.0), ("y", -0.5, 0.5), ("z", -1.0, 1.0), ("t", 0.2, 1.3)]),
        2,
        Arc::new(|u: &[f64]| {
            let (x, y, z, t) = (u[0], u[1], u[2], u[3]);
            let (s, c) = t.sin_cos();
            vec![x * c, y * c, x * s, y * s, z]
        }),
        Arc::new(|u: &[f64]| u[0].hypot(u[1])),
    )
    .expect("valid catalog model")
}

/// `F(x, y, z, t) = (x, y, cos t, sin t, z)`, `f ≡ 1`: `‖h‖² = 1`
/// against a zero right side.
pub fn circle_fiber() -> ImmersionModel {
    ImmersionModel::new(
        "circle-fiber",
        AmbientCosymplectic::euclidean(2),
        3,
        1,
        axes(&[("x", -1.0, 1.0), ("y", -1.0, 1.0), ("z", -1.0, 1.0), ("t", 0.0, 3.0)]),
        2,
        Arc::new(|u: &[f64]| {
            let (s, c) = u[3].sin_cos();
            vec![u[0], u[1], c, s, u[2]]
        }),
        Arc::new(|_: &[f64]| 1.0),
    )
    .expect("valid catalog model")
}

/// Negative control: `F(x, y, z, t) = (x, t, y, 0, z)` puts the fibre
/// direction on `φ(∂x)`, so neither distribution has the required type.
pub fn holomorphic_fiber() -> ImmersionModel {
    ImmersionModel::new(
        "holomorphic-fiber",
        AmbientCosymplectic::euclidean(2),
        3,
        1,
        axes(&[("x", -1.0, 1.0), ("y", -1.0, 1.0), ("z", -1.0, 1.0), ("t", -1.0, 1.0)]),
        2,
        Arc::new(|u: &[f64]| vec![u[0], u[3], u[1], 0.0, u[2]]),
        Arc::new(|_: &[f64]| 1.0),
    )
    .expect("valid control model")
}

/// Models selectable by name.
pub fn builtin_models() -> Vec<ImmersionModel> {
    vec![flat_product(), chen_cone(), circle_fiber()]
}

pub fn model_by_name(name: &str) -> Result<ImmersionModel, GeomError> {
    builtin_models()
        .into_iter()
        .chain(std::iter::once(holomorphic_fiber()))
        .find(|m| m.name == name)
        .ok_or_else(|| GeomError::UnknownModel {
            name: name.to_string(),
            catalog: builtin_models()
                .iter()
                .map(|m| m.name.clone())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes() {
        let names: Vec<String> = builtin_models().into_iter().map(|m| m.name).collect();
        assert_eq!(names, ["flat-product", "chen-cone", "circle-fiber"]);
        let c = chen_cone();
        assert_eq!((c.n1, c.n2, c.ambient.m), (3, 1, 2));
        assert_eq!(c.n(), 4);
    }

    #[test]
    fn lookup() {
        assert_eq!(model_by_name("chen-cone").unwrap().name, "chen-cone");
        let err = model_by_name("torus").unwrap_err().to_string();
        assert!(err.contains("flat-product"), "{err}");
    }

    #[test]
    fn rejects_invalid_models() {
        let map: MapFn = Arc::new(|u: &[f64]| vec![u[0], 0.0, 0.0, 0.0, 0.0]);
        let f: ScalarFn = Arc::new(|_: &[f64]| 1.0);
        let amb = AmbientCosymplectic::euclidean(2);
        let two = vec![ChartAxis::new("a", 0.0, 1.0), ChartAxis::new("b", 0.0, 1.0)];
        assert!(ImmersionModel::new("m", amb, 0, 2, two.clone(), 0, map.clone(), f.clone()).is_err());
        assert!(ImmersionModel::new("m", amb, 1, 1, two.clone(), 1, map.clone(), f.clone()).is_err());
        assert!(ImmersionModel::new("m", amb, 2, 1, two.clone(), 0, map.clone(), f.clone()).is_err());
        let empty = vec![ChartAxis::new("a", 1.0, 1.0), ChartAxis::new("b", 0.0, 1.0)];
        assert!(ImmersionModel::new("m", amb, 1, 1, empty, 0, map.clone(), f.clone()).is_err());
        assert!(ImmersionModel::new("m", amb, 1, 1, two, 0, map, f).is_ok());
    }
}
