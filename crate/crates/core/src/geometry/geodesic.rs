use nalgebra::DVector;
use thiserror::Error;

use super::chart::{ConnectionField, ManifoldChart};
use super::scaled_residual;
use super::types::{ChartPoint, DiffConfig};
use crate::error::{GeometryError, Result};

/// Uniformly spaced samples of a curve and its velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub dt: f64,
    pub times: Vec<f64>,
    pub points: Vec<ChartPoint>,
    pub velocities: Vec<DVector<f64>>,
}

impl GeodesicPath {
    fn start(x0: ChartPoint, v0: DVector<f64>, dt: f64) -> Self {
        Self { dt, times: vec![0.0], points: vec![x0], velocities: vec![v0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&ChartPoint> {
        self.points.last()
    }
}

/// Integration stopped early; `partial` holds every sample reached before `t_exit`.
#[derive(Debug, Clone, Error)]
#[error("geodesic aborted at t = {t_exit}: {cause}")]
pub struct GeodesicAbort {
    pub t_exit: f64,
    pub partial: GeodesicPath,
    pub cause: GeometryError,
}

impl From<GeodesicAbort> for GeometryError {
    fn from(a: GeodesicAbort) -> Self {
        match a.cause {
            GeometryError::InvalidPoint | GeometryError::LeftManifold(_) => {
                GeometryError::LeftManifold(a.t_exit)
            }
            other => other,
        }
    }
}

fn acceleration(conn: &ConnectionField, x: &ChartPoint, v: &DVector<f64>) -> Result<DVector<f64>> {
    Ok(-conn(x)?.contract(v, v))
}

/// Fixed-step RK4 for `ẍ^i + Γ^i_{jk} ẋ^j ẋ^k = 0` on `[0, t_end]` (`t_end` may be
/// negative), with `cfg.ode_steps` steps per unit parameter.
pub fn geodesic_integrate(
    m: &dyn ManifoldChart,
    conn: &ConnectionField,
    x0: &ChartPoint,
    v0: &DVector<f64>,
    t_end: f64,
    cfg: &DiffConfig,
) -> std::result::Result<GeodesicPath, GeodesicAbort> {
    let steps = ((cfg.ode_steps as f64) * t_end.abs()).ceil().max(1.0) as usize;
    let dt = t_end / steps as f64;
    let mut path = GeodesicPath::start(x0.clone(), v0.clone(), dt);
    let abort = |t: f64, path: &GeodesicPath, cause: GeometryError| GeodesicAbort {
        t_exit: t,
        partial: path.clone(),
        cause,
    };
    if x0.dim() != m.dim() || v0.len() != m.dim() {
        let cause = GeometryError::DimensionMismatch { expected: m.dim(), got: x0.dim() };
        return Err(abort(0.0, &GeodesicPath { points: vec![], velocities: vec![], times: vec![], dt }, cause));
    }
    if !m.is_valid(x0) {
        let empty = GeodesicPath { dt, times: vec![], points: vec![], velocities: vec![] };
        return Err(abort(0.0, &empty, GeometryError::InvalidPoint));
    }

    let mut x = x0.coords().clone();
    let mut v = v0.clone();
    for step in 0..steps {
        let t = step as f64 * dt;
        let stage = |xs: &DVector<f64>, vs: &DVector<f64>| -> Result<DVector<f64>> {
            let p = ChartPoint::from_vector(xs.clone());
            if !m.is_valid(&p) {
                return Err(GeometryError::InvalidPoint);
            }
            acceleration(conn, &p, vs)
        };
        let advance = || -> Result<(DVector<f64>, DVector<f64>)> {
            let k1x = v.clone();
            let k1v = stage(&x, &v)?;
            let k2x = &v + &k1v * (0.5 * dt);
            let k2v = stage(&(&x + &k1x * (0.5 * dt)), &k2x)?;
            let k3x = &v + &k2v * (0.5 * dt);
            let k3v = stage(&(&x + &k2x * (0.5 * dt)), &k3x)?;
            let k4x = &v + &k3v * dt;
            let k4v = stage(&(&x + &k3x * dt), &k4x)?;
            let xn = &x + (k1x + &k2x * 2.0 + &k3x * 2.0 + k4x) * (dt / 6.0);
            let vn = &v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0);
            Ok((xn, vn))
        };
        let (xn, vn) = advance().map_err(|e| abort(t, &path, e))?;
        let t_next = (step + 1) as f64 * dt;
        let p = ChartPoint::from_vector(xn.clone());
        if !m.is_valid(&p) {
            return Err(abort(t_next, &path, GeometryError::LeftManifold(t_next)));
        }
        path.times.push(t_next);
        path.points.push(p);
        path.velocities.push(vn.clone());
        x = xn;
        v = vn;
    }
    Ok(path)
}

/// Geodesic-equation residuals `|ẍ + Γ(ẋ, ẋ)|` at the interior nodes of a uniformly
/// sampled curve, using fourth-order five-point stencils. Node `i` of the output
/// corresponds to sample `i + 2`. Each residual is scaled by `max(1, |ẍ| + |Γ(ẋ, ẋ)|)`.
pub fn covariant_acceleration(
    points: &[ChartPoint],
    dt: f64,
    conn: &ConnectionField,
) -> Result<Vec<f64>> {
    if points.len() < 5 {
        return Err(GeometryError::TooFewSamples { needed: 5, got: points.len() });
    }
    let c = |i: usize| points[i].coords();
    (2..points.len() - 2)
        .map(|i| {
            let vel = (c(i - 2) - c(i - 1) * 8.0 + c(i + 1) * 8.0 - c(i + 2)) / (12.0 * dt);
            let acc = (-c(i - 2) + c(i - 1) * 16.0 - c(i) * 30.0 + c(i + 1) * 16.0 - c(i + 2))
                / (12.0 * dt * dt);
            let quad = conn(&points[i])?.contract(&vel, &vel);
            let r = (&acc + &quad).amax();
            Ok(scaled_residual(r, acc.amax() + quad.amax()))
        })
        .collect()
}
