use nalgebra::DVector;
use num_complex::Complex64;

use super::spectral::{hermiticity_defect, trace, trace_product, CMatrix};
use crate::error::{GeometryError, Result};

const ORTHONORMAL_TOL: f64 = 1e-12;

/// Traceless Hermitian basis `σ_1 .. σ_{n²-1}` with `Tr(σ_j σ_k) = δ_jk`; `σ_0 = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    sigma: Vec<CMatrix>,
}

impl HermitianBasis {
    /// Generalised Gell-Mann matrices scaled to unit Hilbert-Schmidt norm.
    pub fn gell_mann(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(GeometryError::Spec(format!("Hilbert dimension {dim} < 2")));
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut sigma = Vec::with_capacity(dim * dim - 1);
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut s = CMatrix::zeros(dim, dim);
                s[(j, k)] = Complex64::new(r, 0.0);
                s[(k, j)] = Complex64::new(r, 0.0);
                sigma.push(s);
                let mut a = CMatrix::zeros(dim, dim);
                a[(j, k)] = Complex64::new(0.0, -r);
                a[(k, j)] = Complex64::new(0.0, r);
                sigma.push(a);
            }
        }
        for l in 1..dim {
            let c = (1.0 / (l * (l + 1)) as f64).sqrt();
            let mut d = CMatrix::zeros(dim, dim);
            for i in 0..l {
                d[(i, i)] = Complex64::new(c, 0.0);
            }
            d[(l, l)] = Complex64::new(-(l as f64) * c, 0.0);
            sigma.push(d);
        }
        Self::from_matrices(dim, sigma)
    }

    /// Validates Hermiticity, tracelessness and orthonormality.
    pub fn from_matrices(dim: usize, sigma: Vec<CMatrix>) -> Result<Self> {
        if sigma.len() != dim * dim - 1 {
            return Err(GeometryError::Spec(format!(
                "need {} basis matrices, got {}",
                dim * dim - 1,
                sigma.len()
            )));
        }
        for (j, s) in sigma.iter().enumerate() {
            if s.nrows() != dim || s.ncols() != dim {
                return Err(GeometryError::Spec(format!("sigma_{} has wrong shape", j + 1)));
            }
            if hermiticity_defect(s) > ORTHONORMAL_TOL {
                return Err(GeometryError::Spec(format!("sigma_{} is not Hermitian", j + 1)));
            }
            if trace(s).norm() > ORTHONORMAL_TOL {
                return Err(GeometryError::Spec(format!("sigma_{} is not traceless", j + 1)));
            }
        }
        for j in 0..sigma.len() {
            for k in j..sigma.len() {
                let expect = if j == k { 1.0 } else { 0.0 };
                if (trace_product(&sigma[j], &sigma[k]) - expect).norm() > ORTHONORMAL_TOL {
                    return Err(GeometryError::Spec(format!(
                        "basis is not orthonormal at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(Self { dim, sigma })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of traceless elements, `n² - 1`.
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self, k: usize) -> &CMatrix {
        &self.sigma[k]
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.sigma
    }

    /// `x^k = Tr(A σ_k)`.
    pub fn coords(&self, a: &CMatrix) -> DVector<f64> {
        DVector::from_iterator(self.sigma.len(), self.sigma.iter().map(|s| trace_product(a, s).re))
    }

    /// `x⁰ I + Σ x^k σ_k`.
    pub fn combine(&self, identity_part: f64, x: &DVector<f64>) -> CMatrix {
        let mut a = CMatrix::identity(self.dim, self.dim) * Complex64::new(identity_part, 0.0);
        for (s, c) in self.sigma.iter().zip(x.iter()) {
            a += s * Complex64::new(*c, 0.0);
        }
        a
    }
}
