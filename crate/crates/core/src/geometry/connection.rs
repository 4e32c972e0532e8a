use nalgebra::{DMatrix, DVector};

use super::chart::{ConnectionField, FrameField, ManifoldChart};
use super::diff::partial_derivatives;
use super::scaled_residual;
use super::types::{
    Array3, Array4, ChartPoint, CoframeMatrix, ConnectionCoefficients, DiffConfig, FrameMatrix,
    MetricMatrix,
};
use crate::error::{GeometryError, Result};

fn ensure_valid(m: &dyn ManifoldChart, x: &ChartPoint) -> Result<()> {
    if x.dim() != m.dim() {
        return Err(GeometryError::DimensionMismatch { expected: m.dim(), got: x.dim() });
    }
    if !m.is_valid(x) {
        return Err(GeometryError::InvalidPoint);
    }
    Ok(())
}

fn frame_partials(
    m: &dyn ManifoldChart,
    frame: &FrameField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<Vec<DMatrix<f64>>> {
    partial_derivatives(m, |p| frame(p).map(FrameMatrix::into_matrix), x, cfg)
}

/// Coefficients of the connection that makes every column of `frame_at` parallel.
pub fn weitzenbock_coefficients(
    m: &dyn ManifoldChart,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<ConnectionCoefficients> {
    weitzenbock_coefficients_of(m, &|p| m.frame_at(p), x, cfg)
}

/// Weitzenböck coefficients of an arbitrary frame field on `m`:
/// `Γ^i_{jk} = -(∂_j E)^i_a (E^{-1})^a_k`.
pub fn weitzenbock_coefficients_of(
    m: &dyn ManifoldChart,
    frame: &FrameField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<ConnectionCoefficients> {
    ensure_valid(m, x)?;
    let e = frame(x)?;
    let e_inv = e.inverse()?;
    let de = frame_partials(m, frame, x, cfg)?;
    let slices: Vec<DMatrix<f64>> = de.iter().map(|d| -(d * &e_inv)).collect();
    Ok(ConnectionCoefficients::from_fn(m.dim(), |i, j, k| slices[j][(i, k)]))
}

/// `max |∂_j E^i_a + Γ^i_{jm} E^m_a|`: zero when every frame column is parallel.
pub fn weitzenbock_residual(
    m: &dyn ManifoldChart,
    frame: &FrameField,
    gamma: &ConnectionCoefficients,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<f64> {
    ensure_valid(m, x)?;
    let e = frame(x)?;
    let de = frame_partials(m, frame, x, cfg)?;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for (j, dej) in de.iter().enumerate() {
        for a in 0..n {
            let col = e.column(a);
            let conn = gamma.along(j, &col);
            for i in 0..n {
                worst = worst.max((dej[(i, a)] + conn[i]).abs());
            }
        }
    }
    Ok(worst)
}

/// Christoffel symbols of the metric,
/// `Γ^i_{jk} = ½ G^{il} (∂_j G_{lk} + ∂_k G_{jl} - ∂_l G_{jk})`.
pub fn levi_civita_coefficients(
    m: &dyn ManifoldChart,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<ConnectionCoefficients> {
    ensure_valid(m, x)?;
    let g_inv = m.metric_at(x)?.inverse()?;
    let dg = partial_derivatives(m, |p| m.metric_at(p).map(|g| g.matrix().clone()), x, cfg)?;
    let n = m.dim();
    // lowered[l][(j, k)] = Γ_{l,jk}
    let lowered: Vec<DMatrix<f64>> = (0..n)
        .map(|l| {
            DMatrix::from_fn(n, n, |j, k| 0.5 * (dg[j][(l, k)] + dg[k][(j, l)] - dg[l][(j, k)]))
        })
        .collect();
    Ok(ConnectionCoefficients::from_fn(n, |i, j, k| {
        (0..n).map(|l| g_inv[(i, l)] * lowered[l][(j, k)]).sum()
    }))
}

/// `max |∂_i G_{jk} - Γ^l_{ij} G_{lk} - Γ^l_{ik} G_{jl}|`, scaled by the size of the terms.
pub fn metric_compatibility_residual(
    m: &dyn ManifoldChart,
    gamma: &ConnectionCoefficients,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<f64> {
    ensure_valid(m, x)?;
    let g = m.metric_at(x)?;
    let g = g.matrix();
    let dg = partial_derivatives(m, |p| m.metric_at(p).map(|g| g.matrix().clone()), x, cfg)?;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for (i, dgi) in dg.iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                let a: f64 = (0..n).map(|l| gamma.get(l, i, j) * g[(l, k)]).sum();
                let b: f64 = (0..n).map(|l| gamma.get(l, i, k) * g[(j, l)]).sum();
                let lhs = dgi[(j, k)];
                let r = scaled_residual(lhs - a - b, lhs.abs() + a.abs() + b.abs());
                worst = worst.max(r);
            }
        }
    }
    Ok(worst)
}

/// `T^i_{jk} = Γ^i_{jk} - Γ^i_{kj}`.
pub fn torsion_components(c: &ConnectionCoefficients) -> Array3 {
    Array3::from_fn(c.dim(), |i, j, k| c.get(i, j, k) - c.get(i, k, j))
}

/// `[X_j, X_k]` for the frame returned by `frame_at`.
pub fn lie_bracket(
    m: &dyn ManifoldChart,
    x: &ChartPoint,
    j: usize,
    k: usize,
    cfg: &DiffConfig,
) -> Result<DVector<f64>> {
    lie_bracket_of(m, &|p| m.frame_at(p), x, j, k, cfg)
}

/// `[X_j, X_k]^i = X_j^m ∂_m X_k^i - X_k^m ∂_m X_j^i` for an arbitrary frame field.
pub fn lie_bracket_of(
    m: &dyn ManifoldChart,
    frame: &FrameField,
    x: &ChartPoint,
    j: usize,
    k: usize,
    cfg: &DiffConfig,
) -> Result<DVector<f64>> {
    ensure_valid(m, x)?;
    let e = frame(x)?;
    let de = frame_partials(m, frame, x, cfg)?;
    Ok(bracket_from_partials(e.matrix(), &de, j, k))
}

fn bracket_from_partials(e: &DMatrix<f64>, de: &[DMatrix<f64>], j: usize, k: usize) -> DVector<f64> {
    let n = e.nrows();
    DVector::from_fn(n, |i, _| {
        (0..n).map(|m| e[(m, j)] * de[m][(i, k)] - e[(m, k)] * de[m][(i, j)]).sum()
    })
}

/// Largest component of any bracket `[X_j, X_k]` of the frame.
pub fn frame_bracket_norm(
    m: &dyn ManifoldChart,
    frame: &FrameField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<f64> {
    ensure_valid(m, x)?;
    let e = frame(x)?;
    let de = frame_partials(m, frame, x, cfg)?;
    let n = m.dim();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for k in (j + 1)..n {
            worst = worst.max(bracket_from_partials(e.matrix(), &de, j, k).amax());
        }
    }
    Ok(worst)
}

/// Exterior derivative of a one-form field evaluated on a pair of vectors,
/// `dβ(Z, W) = (∂_a β_b - ∂_b β_a) Z^a W^b`.
pub fn one_form_differential(
    m: &dyn ManifoldChart,
    form: &dyn Fn(&ChartPoint) -> Result<DVector<f64>>,
    x: &ChartPoint,
    z: &DVector<f64>,
    w: &DVector<f64>,
    cfg: &DiffConfig,
) -> Result<f64> {
    ensure_valid(m, x)?;
    let d = partial_derivatives(m, |p| form(p).map(|v| DMatrix::from_column_slice(v.len(), 1, v.as_slice())), x, cfg)?;
    let n = m.dim();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += (d[a][(b, 0)] - d[b][(a, 0)]) * z[a] * w[b];
        }
    }
    Ok(s)
}

fn connection_matrix(c: &ConnectionCoefficients) -> DMatrix<f64> {
    let n = c.dim();
    DMatrix::from_fn(n, n * n, |i, jk| c.get(i, jk / n, jk % n))
}

fn curvature_with_scale(
    m: &dyn ManifoldChart,
    conn: &ConnectionField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<(Array4, f64)> {
    ensure_valid(m, x)?;
    let n = m.dim();
    let gamma = conn(x)?;
    let outer = cfg.outer();
    let dgamma = partial_derivatives(m, |p| conn(p).map(|c| connection_matrix(&c)), x, &outer)?;
    // dΓ^i_{kl}/dx^j = dgamma[j][(i, k*n + l)]
    let mut r = Array4::zeros(n);
    for i in 0..n {
        for l in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = dgamma[j][(i, k * n + l)] - dgamma[k][(i, j * n + l)];
                    for mm in 0..n {
                        v += gamma.get(i, j, mm) * gamma.get(mm, k, l)
                            - gamma.get(i, k, mm) * gamma.get(mm, j, l);
                    }
                    r.set(i, l, j, k, v);
                }
            }
        }
    }
    let dmax = dgamma.iter().fold(0.0_f64, |a, d| a.max(d.amax()));
    let gmax = gamma.max_abs();
    Ok((r, dmax + n as f64 * gmax * gmax))
}

/// `R^i_{ljk} = ∂_j Γ^i_{kl} - ∂_k Γ^i_{jl} + Γ^i_{jm} Γ^m_{kl} - Γ^i_{km} Γ^m_{jl}`,
/// indexed `(i, l, j, k)`.
///
/// The connection is usually a finite difference itself, so it is differentiated with a step
/// 100 times `cfg.step` (capped at 1e-2) and Richardson extrapolation.
pub fn curvature_components(
    m: &dyn ManifoldChart,
    conn: &ConnectionField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<Array4> {
    curvature_with_scale(m, conn, x, cfg).map(|(r, _)| r)
}

/// `max |R|` scaled by the size of `∂Γ` and `ΓΓ`.
pub fn curvature_residual(
    m: &dyn ManifoldChart,
    conn: &ConnectionField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<f64> {
    curvature_with_scale(m, conn, x, cfg).map(|(r, scale)| scaled_residual(r.max_abs(), scale))
}

/// Metric gradients of the coframe: column `j` is `G^{-1} θ^j`.
pub fn gradient_frame(g: &MetricMatrix, theta: &CoframeMatrix) -> Result<FrameMatrix> {
    FrameMatrix::new(g.solve(&theta.matrix().transpose())?)
}

/// [`gradient_frame`] of `metric_at` and `coframe_at` at `x`.
pub fn gradient_frame_at(m: &dyn ManifoldChart, x: &ChartPoint) -> Result<FrameMatrix> {
    gradient_frame(&m.metric_at(x)?, &m.coframe_at(x)?)
}

/// `(∇, ∇*)`: Weitzenböck connections of `frame_at` and of the gradient frame of
/// `coframe_at`.
pub fn dual_weitzenbock_pair(
    m: &dyn ManifoldChart,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<(ConnectionCoefficients, ConnectionCoefficients)> {
    let primal = weitzenbock_coefficients(m, x, cfg)?;
    let dual = weitzenbock_coefficients_of(m, &|p| gradient_frame_at(m, p), x, cfg)?;
    Ok((primal, dual))
}

/// `Z^m (∂_m W + Γ_m W)` where `dw[m]` holds `∂_m W`.
fn covariant_derivative(
    gamma: &ConnectionCoefficients,
    z: &DVector<f64>,
    w: &DVector<f64>,
    dw: &[DVector<f64>],
) -> DVector<f64> {
    let n = gamma.dim();
    let mut out = DVector::zeros(n);
    for (mm, dwm) in dw.iter().enumerate() {
        out += (dwm + gamma.along(mm, w)) * z[mm];
    }
    out
}

/// Scaled duality residuals for every frame triple `(i, j, k)`:
///
/// `| E_i[G(E_j, E_k)] - G(∇_{E_i} E_j, E_k) - G(E_j, ∇*_{E_i} E_k) |`
///
/// divided by `max(1, sum of the absolute values of the three terms)`. The directional
/// derivative is a central difference of `G(E_j, E_k)` contracted with `E_i`.
pub fn duality_residuals(
    m: &dyn ManifoldChart,
    c1: &ConnectionField,
    c2: &ConnectionField,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<Array3> {
    ensure_valid(m, x)?;
    let n = m.dim();
    let e = m.frame_at(x)?;
    let g = m.metric_at(x)?;
    let gamma1 = c1(x)?;
    let gamma2 = c2(x)?;
    let de = frame_partials(m, &|p| m.frame_at(p), x, cfg)?;
    let dpair = partial_derivatives(
        m,
        |p| {
            let e = m.frame_at(p)?;
            let g = m.metric_at(p)?;
            Ok(e.matrix().transpose() * g.matrix() * e.matrix())
        },
        x,
        cfg,
    )?;
    let cols: Vec<DVector<f64>> = (0..n).map(|a| e.column(a)).collect();
    let dcols: Vec<Vec<DVector<f64>>> = (0..n)
        .map(|a| de.iter().map(|d| d.column(a).into_owned()).collect())
        .collect();

    let mut out = Array3::zeros(n);
    for i in 0..n {
        let zi = &cols[i];
        let nabla1: Vec<DVector<f64>> =
            (0..n).map(|j| covariant_derivative(&gamma1, zi, &cols[j], &dcols[j])).collect();
        let nabla2: Vec<DVector<f64>> =
            (0..n).map(|k| covariant_derivative(&gamma2, zi, &cols[k], &dcols[k])).collect();
        for j in 0..n {
            for k in 0..n {
                let lhs: f64 = (0..n).map(|mm| zi[mm] * dpair[mm][(j, k)]).sum();
                let a = g.inner(&nabla1[j], &cols[k]);
                let b = g.inner(&cols[j], &nabla2[k]);
                out.set(i, j, k, scaled_residual(lhs - a - b, lhs.abs() + a.abs() + b.abs()));
            }
        }
    }
    Ok(out)
}

/// Single-triple form of [`duality_residuals`].
#[allow(clippy::too_many_arguments)]
pub fn duality_residual(
    m: &dyn ManifoldChart,
    c1: &ConnectionField,
    c2: &ConnectionField,
    x: &ChartPoint,
    i: usize,
    j: usize,
    k: usize,
    cfg: &DiffConfig,
) -> Result<f64> {
    let n = m.dim();
    if i >= n || j >= n || k >= n {
        return Err(GeometryError::DimensionMismatch { expected: n, got: i.max(j).max(k) + 1 });
    }
    duality_residuals(m, c1, c2, x, cfg).map(|r| r.get(i, j, k))
}

/// Largest scaled component of `∇_{Y_k} X_l` and `∇*_{X_k} Y_l`, where `∇`, `∇*` are the
/// Weitzenböck connections of `X = frame_at` and of its gradient frame `Y`.
pub fn cross_parallelism_residual(
    m: &dyn ManifoldChart,
    x: &ChartPoint,
    cfg: &DiffConfig,
) -> Result<f64> {
    ensure_valid(m, x)?;
    let n = m.dim();
    let (gamma, gamma_star) = dual_weitzenbock_pair(m, x, cfg)?;
    let ex = m.frame_at(x)?;
    let ey = gradient_frame_at(m, x)?;
    let dex = frame_partials(m, &|p| m.frame_at(p), x, cfg)?;
    let dey = frame_partials(m, &|p| gradient_frame_at(m, p), x, cfg)?;
    let column_partials = |d: &[DMatrix<f64>], a: usize| -> Vec<DVector<f64>> {
        d.iter().map(|dm| dm.column(a).into_owned()).collect()
    };
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            let dxl = column_partials(&dex, l);
            let r1 = covariant_derivative(&gamma, &ey.column(k), &ex.column(l), &dxl);
            let s1: f64 = dxl.iter().map(|v| v.amax()).fold(0.0, f64::max) * ey.column(k).amax();
            worst = worst.max(scaled_residual(r1.amax(), s1));

            let dyl = column_partials(&dey, l);
            let r2 = covariant_derivative(&gamma_star, &ex.column(k), &ey.column(l), &dyl);
            let s2: f64 = dyl.iter().map(|v| v.amax()).fold(0.0, f64::max) * ex.column(k).amax();
            worst = worst.max(scaled_residual(r2.amax(), s2));
        }
    }
    Ok(worst)
}
