//! The superoperators `K^f_ρ = f(L_ρ R_ρ^{-1}) R_ρ` and `T^f_ρ = (K^f_ρ)^{-1}`.
//!
//! Both act diagonally on matrix units `|j⟩⟨k|` of the eigenbasis of `ρ`: entry `(j, k)` is
//! multiplied (respectively divided) by `c_jk = p_k f(p_j / p_k)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::monotone::MonotoneFunction;
use super::spectral::{trace, CMatrix};
use super::state::{DensityState, TangentMatrix};
use crate::error::{GeometryError, Result};

/// `c_jk = p_k f(p_j / p_k)` over the spectrum of `ρ`.
pub fn multipliers(state: &DensityState, f: &MonotoneFunction) -> Result<DMatrix<f64>> {
    let p = state.spectrum();
    let n = p.len();
    let mut c = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            c[(j, k)] = p[k] * f.eval(p[j] / p[k])?;
        }
    }
    Ok(c)
}

/// `K^f_ρ` and `T^f_ρ` for one state, with the multiplier matrix computed once.
#[derive(Debug, Clone)]
pub struct Superoperator<'a> {
    state: &'a DensityState,
    c: DMatrix<f64>,
}

impl<'a> Superoperator<'a> {
    pub fn new(state: &'a DensityState, f: &MonotoneFunction) -> Result<Self> {
        Ok(Self { state, c: multipliers(state, f)? })
    }

    pub fn multipliers(&self) -> &DMatrix<f64> {
        &self.c
    }

    fn check(&self, a: &CMatrix) -> Result<()> {
        let n = self.state.dim();
        if a.nrows() != n || a.ncols() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: a.nrows() });
        }
        Ok(())
    }

    fn scale(&self, a: &CMatrix, invert: bool) -> Result<CMatrix> {
        self.check(a)?;
        let mut t = self.state.to_eigenbasis(a);
        for ((j, k), z) in t.iter_mut().enumerate().map(|(idx, z)| ((idx % a.nrows(), idx / a.nrows()), z)) {
            let c = self.c[(j, k)];
            *z = if invert { *z / c } else { *z * c };
        }
        Ok(self.state.from_eigenbasis(&t))
    }

    pub fn apply_k(&self, a: &CMatrix) -> Result<CMatrix> {
        self.scale(a, false)
    }

    pub fn apply_tf(&self, a: &CMatrix) -> Result<CMatrix> {
        self.scale(a, true)
    }

    /// `Tr(V T^f_ρ(W))` for matrices already expressed in the eigenbasis of `ρ`.
    pub fn metric_in_eigenbasis(&self, v: &CMatrix, w: &CMatrix) -> f64 {
        let n = self.c.nrows();
        let mut s = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                s += v[(b, a)] * w[(a, b)] / self.c[(a, b)];
            }
        }
        s.re
    }

    /// `G_f(V, W)(ρ) = Tr(V T^f_ρ(W))`.
    pub fn metric(&self, v: &TangentMatrix, w: &TangentMatrix) -> Result<f64> {
        self.check(v.matrix())?;
        self.check(w.matrix())?;
        let vt = self.state.to_eigenbasis(v.matrix());
        let wt = self.state.to_eigenbasis(w.matrix());
        Ok(self.metric_in_eigenbasis(&vt, &wt))
    }

    /// `Y = K^f_ρ(ω) - Tr(K^f_ρ(ω)) ρ`.
    pub fn gradient(&self, omega: &CMatrix) -> Result<TangentMatrix> {
        let k = self.apply_k(omega)?;
        let c = trace(&k);
        TangentMatrix::new(k - self.state.matrix() * c)
    }
}

pub fn apply_k(state: &DensityState, f: &MonotoneFunction, a: &CMatrix) -> Result<CMatrix> {
    Superoperator::new(state, f)?.apply_k(a)
}

pub fn apply_tf(state: &DensityState, f: &MonotoneFunction, a: &CMatrix) -> Result<CMatrix> {
    Superoperator::new(state, f)?.apply_tf(a)
}

pub fn metric_gf(
    state: &DensityState,
    f: &MonotoneFunction,
    v: &TangentMatrix,
    w: &TangentMatrix,
) -> Result<f64> {
    Superoperator::new(state, f)?.metric(v, w)
}

/// Metric gradient of `ρ ↦ Tr(ρ ω)`.
pub fn gradient_field(
    state: &DensityState,
    f: &MonotoneFunction,
    omega: &TangentMatrix,
) -> Result<TangentMatrix> {
    Superoperator::new(state, f)?.gradient(omega.matrix())
}
