use nalgebra::DMatrix;

use super::chart::ManifoldChart;
use super::types::{ChartPoint, DiffConfig};
use crate::error::{GeometryError, Result};

/// Central-difference partials `∂_j F(x)` of a matrix-valued field, one matrix per axis.
///
/// On axis `a` the stencil half-width is `cfg.step * L` with `L = min(1, length_scale(x, a))`,
/// raised where needed to the roundoff-optimal width `(ε L²)^{1/3}` (`(ε L⁴)^{1/5}` with
/// Richardson): chart coordinates carry absolute rounding of order `ε`, which a purely relative
/// step would amplify without bound near the boundary. The scale is per axis because a field can
/// be large through a coordinate that the stencil does not move; its rounding then swamps a
/// stencil sized for that coordinate. If a stencil point leaves the valid region the steps are
/// halved once before giving up with `InvalidPoint`.
pub fn partial_derivatives<F>(
    chart: &dyn ManifoldChart,
    field: F,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<Vec<DMatrix<f64>>>
where
    F: Fn(&ChartPoint) -> Result<DMatrix<f64>>,
{
    if !chart.is_valid(x) {
        return Err(GeometryError::InvalidPoint);
    }
    let widths: Vec<f64> = (0..x.dim()).map(|a| stencil_width(chart, x, a, cfg)).collect();
    match partials_at(chart, &field, x, &widths, 1.0, cfg.richardson) {
        Err(GeometryError::InvalidPoint) => partials_at(chart, &field, x, &widths, 0.5, cfg.richardson),
        other => other,
    }
}

pub(crate) fn stencil_width(chart: &dyn ManifoldChart, x: &ChartPoint, axis: usize, cfg: &DiffConfig) -> f64 {
    let l = chart.length_scale(x, axis).min(1.0);
    let eps = f64::EPSILON * x.coords().amax().max(1.0);
    let floor = if cfg.richardson { (eps * l.powi(4)).powf(0.2) } else { (eps * l * l).cbrt() };
    (cfg.step * l).max(floor)
}

fn partials_at<F>(
    chart: &dyn ManifoldChart,
    field: &F,
    x: &ChartPoint,
    widths: &[f64],
    shrink: f64,
    richardson: bool,
) -> Result<Vec<DMatrix<f64>>>
where
    F: Fn(&ChartPoint) -> Result<DMatrix<f64>>,
{
    (0..x.dim())
        .map(|axis| {
            let h = shrink * widths[axis];
            let coarse = central(chart, field, x, axis, h)?;
            if richardson {
                let fine = central(chart, field, x, axis, 0.5 * h)?;
                Ok((fine * 4.0 - coarse) / 3.0)
            } else {
                Ok(coarse)
            }
        })
        .collect()
}

fn central<F>(
    chart: &dyn ManifoldChart,
    field: &F,
    x: &ChartPoint,
    axis: usize,
    h: f64,
) -> Result<DMatrix<f64>>
where
    F: Fn(&ChartPoint) -> Result<DMatrix<f64>>,
{
    let plus = x.shifted(axis, h);
    let minus = x.shifted(axis, -h);
    if !chart.is_valid(&plus) || !chart.is_valid(&minus) {
        return Err(GeometryError::InvalidPoint);
    }
    let fp = field(&plus)?;
    let fm = field(&minus)?;
    // the spacing actually realised in floating point
    let width = plus.coords()[axis] - minus.coords()[axis];
    Ok((fp - fm) / width)
}
