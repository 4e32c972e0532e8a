use nalgebra::{DMatrix, DVector};
use rand::RngCore;

use super::basis::HermitianBasis;
use super::monotone::MonotoneFunction;
use super::spectral::{hermitian_eigenvalues, trace_product, CMatrix};
use super::state::{DensityState, TangentMatrix};
use super::superop::Superoperator;
use crate::error::{GeometryError, Result};
use crate::geometry::{ChartPoint, CoframeMatrix, FrameMatrix, ManifoldChart, MetricMatrix};

/// Eigenvalue margin for chart points, stricter than the state floor so that stencils
/// around a valid point stay faithful.
const CHART_FLOOR: f64 = 1e-9;

/// Faithful states in the coordinates `x^k = Tr(ρ σ_k)`, i.e. `ρ(x) = I/n + Σ x^k σ_k`.
///
/// The frame is the mixture frame `X_k = σ_k`, which is the identity in these coordinates.
/// The coframe is `θ^k = d Tr(ρ ω_k)`, so its components `Tr(σ_i ω_k)` are constant.
#[derive(Debug, Clone)]
pub struct QuantumChart {
    basis: HermitianBasis,
    f: MonotoneFunction,
    omega: Vec<TangentMatrix>,
    coframe: DMatrix<f64>,
}

impl QuantumChart {
    /// `ω_k = σ_k`.
    pub fn new(basis: HermitianBasis, f: MonotoneFunction) -> Result<Self> {
        let omega = basis
            .elements()
            .iter()
            .map(|s| TangentMatrix::new(s.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::with_omega(basis, f, omega)
    }

    /// Gell-Mann basis in dimension `dim`, `ω_k = σ_k`.
    pub fn standard(dim: usize, f: MonotoneFunction) -> Result<Self> {
        Self::new(HermitianBasis::gell_mann(dim)?, f)
    }

    /// Any linearly independent traceless Hermitian `ω_k`.
    pub fn with_omega(basis: HermitianBasis, f: MonotoneFunction, omega: Vec<TangentMatrix>) -> Result<Self> {
        let m = basis.len();
        if omega.len() != m {
            return Err(GeometryError::Spec(format!("need {m} one-form generators, got {}", omega.len())));
        }
        if let Some(w) = omega.iter().find(|w| w.matrix().nrows() != basis.dim()) {
            return Err(GeometryError::DimensionMismatch { expected: basis.dim(), got: w.matrix().nrows() });
        }
        if !f.eval(1.0).is_ok_and(|v| v > 0.0) {
            return Err(GeometryError::Spec(format!("monotone function {} is not positive at 1", f.name())));
        }
        let coframe = DMatrix::from_fn(m, m, |k, i| trace_product(basis.sigma(i), omega[k].matrix()).re);
        CoframeMatrix::new(coframe.clone())
            .map_err(|_| GeometryError::Spec("one-form generators are linearly dependent".into()))?;
        Ok(Self { basis, f, omega, coframe })
    }

    pub fn basis(&self) -> &HermitianBasis {
        &self.basis
    }

    pub fn monotone(&self) -> &MonotoneFunction {
        &self.f
    }

    pub fn omega(&self) -> &[TangentMatrix] {
        &self.omega
    }

    pub fn state_at(&self, x: &ChartPoint) -> Result<DensityState> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        DensityState::from_coords(&self.basis, x.coords())
    }

    pub fn coords_of(&self, rho: &DensityState) -> Result<ChartPoint> {
        if rho.dim() != self.basis.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.basis.dim(), got: rho.dim() });
        }
        Ok(ChartPoint::from_vector(rho.coords(&self.basis)))
    }

    pub fn tangent_coords(&self, v: &TangentMatrix) -> DVector<f64> {
        self.basis.coords(v.matrix())
    }

    pub fn tangent_from_coords(&self, v: &DVector<f64>) -> Result<TangentMatrix> {
        TangentMatrix::from_coords(&self.basis, v)
    }

    /// Gradient frame from `Y_k = K(ω_k) − Tr(K(ω_k)) ρ`, column `k` holding `Tr(Y_k σ_i)`.
    pub fn gradient_frame_direct(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        let rho = self.state_at(x)?;
        let sup = Superoperator::new(&rho, &self.f)?;
        let m = self.basis.len();
        let mut e = DMatrix::zeros(m, m);
        for (k, w) in self.omega.iter().enumerate() {
            let y = sup.gradient(w.matrix())?;
            e.set_column(k, &self.tangent_coords(&y));
        }
        FrameMatrix::new(e)
    }

    fn ambient(&self, x: &ChartPoint) -> CMatrix {
        self.basis.combine(1.0 / self.basis.dim() as f64, x.coords())
    }
}

impl ManifoldChart for QuantumChart {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == self.dim()
            && x.coords().iter().all(|v| v.is_finite())
            && hermitian_eigenvalues(&self.ambient(x))[0] > CHART_FLOOR
    }

    /// `G_ij = Tr(σ_i T^f_ρ(σ_j))`.
    fn metric_at(&self, x: &ChartPoint) -> Result<MetricMatrix> {
        let rho = self.state_at(x)?;
        let sup = Superoperator::new(&rho, &self.f)?;
        let rotated: Vec<CMatrix> = self.basis.elements().iter().map(|s| rho.to_eigenbasis(s)).collect();
        let m = rotated.len();
        let mut g = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = sup.metric_in_eigenbasis(&rotated[i], &rotated[j]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        MetricMatrix::new(g)
    }

    fn frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        Ok(FrameMatrix::identity(self.dim()))
    }

    fn coframe_at(&self, x: &ChartPoint) -> Result<CoframeMatrix> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        CoframeMatrix::new(self.coframe.clone())
    }

    /// `AA† / Tr(AA†)` with complex Gaussian `A`, redrawn below the chart floor.
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        loop {
            let rho = DensityState::random(rng, self.basis.dim());
            if rho.min_eigenvalue() > CHART_FLOOR {
                return ChartPoint::from_vector(rho.coords(&self.basis));
            }
        }
    }

    /// Smallest eigenvalue of `ρ(x)`.
    fn length_scale(&self, x: &ChartPoint, _axis: usize) -> f64 {
        hermitian_eigenvalues(&self.ambient(x))[0].max(CHART_FLOOR)
    }
}
