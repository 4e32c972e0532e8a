use super::scaled_residual;
use super::types::{ConnectionCoefficients, MetricMatrix, Tensor3};
use crate::error::{GeometryError, Result};

fn check_shapes(
    a: &ConnectionCoefficients,
    b: &ConnectionCoefficients,
    g: &MetricMatrix,
) -> Result<usize> {
    let n = g.dim();
    for got in [a.dim(), b.dim()] {
        if got != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got });
        }
    }
    Ok(n)
}

/// `T_{ijk} = G_{lk} (Γ^l_{ij} - Γ^{G,l}_{ij})`, i.e. `T(Z, W, V) = G(∇_Z W - ∇^G_Z W, V)`.
pub fn amari_tensor_components(
    conn: &ConnectionCoefficients,
    levi_civita: &ConnectionCoefficients,
    g: &MetricMatrix,
) -> Result<Tensor3> {
    let n = check_shapes(conn, levi_civita, g)?;
    let g = g.matrix();
    Ok(Tensor3::from_fn(n, |i, j, k| {
        (0..n).map(|l| g[(l, k)] * (conn.get(l, i, j) - levi_civita.get(l, i, j))).sum()
    }))
}

/// The same tensor written through the dual connection,
/// `T(Z, W, V) = G(W, ∇^G_Z V - ∇*_Z V)`, i.e. `T_{ijk} = G_{jl} (Γ^{G,l}_{ik} - Γ*^l_{ik})`.
pub fn amari_tensor_from_dual(
    dual: &ConnectionCoefficients,
    levi_civita: &ConnectionCoefficients,
    g: &MetricMatrix,
) -> Result<Tensor3> {
    let n = check_shapes(dual, levi_civita, g)?;
    let g = g.matrix();
    Ok(Tensor3::from_fn(n, |i, j, k| {
        (0..n).map(|l| g[(j, l)] * (levi_civita.get(l, i, k) - dual.get(l, i, k))).sum()
    }))
}

/// Largest violations of the three transposition symmetries of a (0,3) tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryDefects {
    /// `max |T_ijk - T_jik|`; vanishes iff `∇` is torsion-free.
    pub d12: f64,
    /// `max |T_ijk - T_kji|`; vanishes iff `∇*` is torsion-free.
    pub d13: f64,
    /// `max |T_ijk - T_ikj|`.
    pub d23: f64,
    /// `max |T_ijk|`.
    pub scale: f64,
}

impl SymmetryDefects {
    /// Defects divided by `max(1, max |T|)`.
    pub fn relative(&self) -> Self {
        Self {
            d12: scaled_residual(self.d12, self.scale),
            d13: scaled_residual(self.d13, self.scale),
            d23: scaled_residual(self.d23, self.scale),
            scale: self.scale,
        }
    }

    pub fn max(&self) -> f64 {
        self.d12.max(self.d13).max(self.d23)
    }
}

pub fn symmetry_defects(t: &Tensor3) -> SymmetryDefects {
    let n = t.dim();
    let (mut d12, mut d13, mut d23) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = t.get(i, j, k);
                d12 = d12.max((v - t.get(j, i, k)).abs());
                d13 = d13.max((v - t.get(k, j, i)).abs());
                d23 = d23.max((v - t.get(i, k, j)).abs());
            }
        }
    }
    SymmetryDefects { d12, d13, d23, scale: t.max_abs() }
}
