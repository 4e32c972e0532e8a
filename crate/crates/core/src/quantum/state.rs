use nalgebra::DVector;
use num_complex::Complex64;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};

use super::basis::HermitianBasis;
use super::spectral::{from_spectrum, hermitian_eigen, hermitize, hermiticity_defect, trace, CMatrix};
use crate::error::{GeometryError, Result};

/// Faithful states have every eigenvalue above this floor.
pub const STATE_FLOOR: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Strictly positive unit-trace Hermitian matrix with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    rho: CMatrix,
    spectrum: DVector<f64>,
    vectors: CMatrix,
}

impl DensityState {
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(GeometryError::InvalidState("matrix is not square".into()));
        }
        let defect = hermiticity_defect(&rho);
        if defect > HERMITIAN_TOL {
            return Err(GeometryError::InvalidState(format!("Hermiticity defect {defect:.3e}")));
        }
        let tr = trace(&rho);
        if (tr - 1.0).norm() > TRACE_TOL {
            return Err(GeometryError::InvalidState(format!("trace {tr}")));
        }
        let rho = hermitize(&rho);
        let (spectrum, vectors) = hermitian_eigen(&rho);
        let min = spectrum.min();
        if !(min > STATE_FLOOR) {
            return Err(GeometryError::InvalidState(format!("minimum eigenvalue {min:.3e}")));
        }
        let rebuilt = from_spectrum(&spectrum, &vectors, |l| l);
        let err = (&rebuilt - &rho).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if err > RECONSTRUCTION_TOL {
            return Err(GeometryError::InvalidState(format!("reconstruction error {err:.3e}")));
        }
        Ok(Self { rho, spectrum, vectors })
    }

    /// Divides by the trace before validating. For matrix functions whose output is
    /// positive by construction.
    pub fn normalized(m: CMatrix) -> Result<Self> {
        let tr = trace(&m).re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(GeometryError::InvalidState(format!("trace {tr}")));
        }
        Self::new(hermitize(&m) / Complex64::new(tr, 0.0))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let rho = CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        Self::new(rho).expect("maximally mixed state is faithful")
    }

    /// `diag(p)` in the computational basis.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(p.len(), p.iter().map(|v| Complex64::new(*v, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// `ρ(x) = I/n + Σ x^k σ_k`.
    pub fn from_coords(basis: &HermitianBasis, x: &DVector<f64>) -> Result<Self> {
        if x.len() != basis.len() {
            return Err(GeometryError::DimensionMismatch { expected: basis.len(), got: x.len() });
        }
        Self::new(basis.combine(1.0 / basis.dim() as f64, x))
    }

    pub fn coords(&self, basis: &HermitianBasis) -> DVector<f64> {
        basis.coords(&self.rho)
    }

    /// `AA† / Tr(AA†)` with complex Gaussian `A`, redrawn until faithful.
    pub fn random(rng: &mut dyn RngCore, dim: usize) -> Self {
        loop {
            let a = CMatrix::from_fn(dim, dim, |_, _| {
                Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
            });
            if let Ok(s) = Self::normalized(&a * a.adjoint()) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    /// Eigenvalues `p_j`, ascending.
    pub fn spectrum(&self) -> &DVector<f64> {
        &self.spectrum
    }

    /// Column `j` is the eigenvector `|j⟩`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum[0]
    }

    /// `U† A U`: matrix elements `⟨j|A|k⟩`.
    pub fn to_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * a * &self.vectors
    }

    /// `U A U†`.
    pub fn from_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        &self.vectors * a * self.vectors.adjoint()
    }

    /// `g(ρ)` through the cached decomposition.
    pub fn function(&self, g: impl Fn(f64) -> f64) -> CMatrix {
        from_spectrum(&self.spectrum, &self.vectors, g)
    }

    pub fn ln(&self) -> CMatrix {
        self.function(f64::ln)
    }

    pub fn power(&self, s: f64) -> CMatrix {
        self.function(|l| l.powf(s))
    }
}

/// Traceless Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentMatrix(CMatrix);

impl TangentMatrix {
    pub fn new(v: CMatrix) -> Result<Self> {
        if !v.is_square() {
            return Err(GeometryError::InvalidTangent("matrix is not square".into()));
        }
        let defect = hermiticity_defect(&v);
        if defect > HERMITIAN_TOL {
            return Err(GeometryError::InvalidTangent(format!("Hermiticity defect {defect:.3e}")));
        }
        let tr = trace(&v);
        if tr.norm() > TRACE_TOL {
            return Err(GeometryError::InvalidTangent(format!("trace {tr}")));
        }
        Ok(Self(hermitize(&v)))
    }

    /// `Σ v^k σ_k`.
    pub fn from_coords(basis: &HermitianBasis, v: &DVector<f64>) -> Result<Self> {
        if v.len() != basis.len() {
            return Err(GeometryError::DimensionMismatch { expected: basis.len(), got: v.len() });
        }
        Self::new(basis.combine(0.0, v))
    }

    /// Subtracts the trace part of a Hermitian matrix.
    pub fn traceless_part(a: &CMatrix) -> Result<Self> {
        let n = a.nrows();
        let shift = trace(a) / Complex64::new(n as f64, 0.0);
        Self::new(a - CMatrix::identity(n, n) * shift)
    }

    /// Gaussian coordinates in `basis`, rescaled to Hilbert-Schmidt norm `norm`.
    pub fn random(rng: &mut dyn RngCore, basis: &HermitianBasis, norm: f64) -> Self {
        let v: DVector<f64> = DVector::from_fn(basis.len(), |_, _| StandardNormal.sample(&mut *rng));
        let v: DVector<f64> = &v * (norm / v.norm().max(f64::MIN_POSITIVE));
        Self::from_coords(basis, &v).expect("basis combination is a tangent")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}
