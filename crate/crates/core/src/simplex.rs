//! The open probability simplex `Δ_n` with the Fisher-Rao metric.
//!
//! Chart coordinates are the first `n - 1` probabilities; `p^n = 1 - Σ x^i`. Tangent
//! vectors are ambient vectors with zero component sum, and their chart components are
//! their first `n - 1` entries.
//!
//! The mixture frame `L_k = a_k` is constant. The coframe `θ^k = d(p · b_k)` pairs with it
//! to the constant matrix `C_{kj} = a_j · b_k`, and the Fisher-Rao gradients of the `θ^k`
//! are the fundamental fields `Y_k(p) = ((b_k^i - p · b_k) p^i)_i` of the multiplicative
//! action of `R^n_+`. Their Weitzenböck connection is the exponential connection.

use nalgebra::{DMatrix, DVector};
use rand::RngCore;
use rand_distr::{Distribution, Exp1};

use crate::error::{GeometryError, Result};
use crate::geometry::{ChartPoint, CoframeMatrix, FrameMatrix, ManifoldChart, MetricMatrix};

const NORMALIZATION_TOL: f64 = 1e-12;

/// Strict positivity margin of the numerically valid region.
pub const POSITIVITY_MARGIN: f64 = 1e-9;

/// A nowhere-vanishing probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(GeometryError::Domain(format!("need at least 2 outcomes, got {}", p.len())));
        }
        if let Some(bad) = p.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(GeometryError::Domain(format!("non-positive probability {bad}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(GeometryError::Domain(format!("probabilities sum to {sum}")));
        }
        Ok(Self(p))
    }

    /// Uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// Recovers the last component from chart coordinates.
    pub fn from_chart(x: &ChartPoint) -> Result<Self> {
        let mut p: Vec<f64> = x.coords().iter().copied().collect();
        let last = 1.0 - p.iter().sum::<f64>();
        p.push(last);
        Self::new(p)
    }

    pub fn to_chart(&self) -> ChartPoint {
        ChartPoint::new(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn dot(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(p, b)| p * b).sum()
    }
}

/// An ambient vector with zero component sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexTangent(Vec<f64>);

impl SimplexTangent {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        let sum: f64 = a.iter().sum();
        let scale = a.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if (sum / scale).abs() > NORMALIZATION_TOL {
            return Err(GeometryError::Domain(format!("tangent components sum to {sum}")));
        }
        Ok(Self(a))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn dot(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

/// Mixture directions `a_k` and coframe directions `b_k`, `k = 1..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFrameSpec {
    n: usize,
    a: Vec<SimplexTangent>,
    b: Vec<SimplexTangent>,
}

impl SimplexFrameSpec {
    pub fn new(a: Vec<SimplexTangent>, b: Vec<SimplexTangent>) -> Result<Self> {
        let n = a.first().map(SimplexTangent::len).unwrap_or(0);
        if n < 2 {
            return Err(GeometryError::Spec("simplex needs n >= 2".into()));
        }
        if a.len() != n - 1 || b.len() != n - 1 {
            return Err(GeometryError::Spec(format!(
                "need {} directions per family, got {} and {}",
                n - 1,
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|v| v.len() != n) {
            return Err(GeometryError::Spec("direction vectors of unequal length".into()));
        }
        for (name, family) in [("a", &a), ("b", &b)] {
            let m = DMatrix::from_fn(n, n - 1, |i, k| family[k].0[i]);
            let sv = m.svd(false, false).singular_values;
            if sv.min() <= 1e-12 * sv.max().max(1.0) {
                return Err(GeometryError::Spec(format!("{name} directions are linearly dependent")));
            }
        }
        let spec = Self { n, a, b };
        let c = spec.pairing();
        if c.clone().try_inverse().is_none() || c.determinant().abs() < 1e-12 {
            return Err(GeometryError::Spec("pairing matrix a_j . b_k is singular".into()));
        }
        Ok(spec)
    }

    /// `a_k = b_k = e_k - e_n`.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(GeometryError::Spec("simplex needs n >= 2".into()));
        }
        let dirs: Vec<SimplexTangent> = (0..n - 1)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[k] = 1.0;
                v[n - 1] = -1.0;
                SimplexTangent(v)
            })
            .collect();
        Self::new(dirs.clone(), dirs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[SimplexTangent] {
        &self.a
    }

    pub fn b(&self) -> &[SimplexTangent] {
        &self.b
    }

    /// `C_{kj} = θ^k(L_j) = a_j · b_k`.
    pub fn pairing(&self) -> DMatrix<f64> {
        let m = self.n - 1;
        DMatrix::from_fn(m, m, |k, j| self.a[j].dot(&self.b[k].0))
    }
}

/// `Σ_j u^j v^j / p^j`.
pub fn fisher_rao_metric(p: &ProbabilityVector, u: &SimplexTangent, v: &SimplexTangent) -> Result<f64> {
    if u.len() != p.len() || v.len() != p.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: u.len().min(v.len()) });
    }
    if p.0.iter().any(|x| *x <= 0.0) {
        return Err(GeometryError::Domain("probability vector has a non-positive entry".into()));
    }
    Ok(p.0.iter().zip(&u.0).zip(&v.0).map(|((p, a), b)| a * b / p).sum())
}

/// Chart components of the mixture frame `L_k(p) = a_k` (independent of `p`).
pub fn mixture_frame(spec: &SimplexFrameSpec, p: &ProbabilityVector) -> Result<FrameMatrix> {
    if p.len() != spec.n {
        return Err(GeometryError::DimensionMismatch { expected: spec.n, got: p.len() });
    }
    let m = spec.n - 1;
    FrameMatrix::new(DMatrix::from_fn(m, m, |i, k| spec.a[k].0[i]))
}

/// `p + t v`.
pub fn mixture_geodesic(p: &ProbabilityVector, v: &SimplexTangent, t: f64) -> Result<ProbabilityVector> {
    if v.len() != p.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: v.len() });
    }
    let q: Vec<f64> = p.0.iter().zip(&v.0).map(|(p, v)| p + t * v).collect();
    if q.iter().any(|x| *x <= 0.0) {
        return Err(GeometryError::LeftManifold(t));
    }
    ProbabilityVector::new(q)
}

/// Ambient components of the gradient fields, column `k` is
/// `((b_k^1 - N) p^1, ..., (b_k^n - N) p^n)` with `N = p · b_k`.
pub fn exponential_gradient_frame(spec: &SimplexFrameSpec, p: &ProbabilityVector) -> Result<DMatrix<f64>> {
    if p.len() != spec.n {
        return Err(GeometryError::DimensionMismatch { expected: spec.n, got: p.len() });
    }
    let n = spec.n;
    Ok(DMatrix::from_fn(n, n - 1, |i, k| {
        let b = &spec.b[k].0;
        (b[i] - p.dot(b)) * p.0[i]
    }))
}

/// `γ(q, p) = (q^j p^j)_j / Σ q^j p^j`.
pub fn rplus_action(q: &[f64], p: &ProbabilityVector) -> Result<ProbabilityVector> {
    if q.len() != p.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: q.len() });
    }
    if let Some(bad) = q.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(GeometryError::Domain(format!("group element has entry {bad}")));
    }
    let w: Vec<f64> = q.iter().zip(&p.0).map(|(q, p)| q * p).collect();
    let norm: f64 = w.iter().sum();
    Ok(ProbabilityVector(w.into_iter().map(|x| x / norm).collect()))
}

/// `(e^{t v^j} p^j)_j / Σ e^{t v^j} p^j`, defined for every real `t`.
pub fn exponential_geodesic(p: &ProbabilityVector, v: &[f64], t: f64) -> Result<ProbabilityVector> {
    if v.len() != p.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: v.len() });
    }
    // Shifting the exponent by a constant leaves the curve unchanged.
    let shift = v.iter().map(|x| t * x).fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = v.iter().zip(&p.0).map(|(v, p)| (t * v - shift).exp() * p).collect();
    let norm: f64 = w.iter().sum();
    Ok(ProbabilityVector(w.into_iter().map(|x| x / norm).collect()))
}

/// `Δ_n` as a [`ManifoldChart`]: Fisher-Rao metric, mixture frame, coframe `d(p · b_k)`.
#[derive(Debug, Clone)]
pub struct SimplexChart {
    spec: SimplexFrameSpec,
    frame: DMatrix<f64>,
    coframe: DMatrix<f64>,
}

impl SimplexChart {
    pub fn new(spec: SimplexFrameSpec) -> Result<Self> {
        let n = spec.n;
        let m = n - 1;
        let frame = DMatrix::from_fn(m, m, |i, k| spec.a[k].0[i]);
        // d(p · b_k) with p^n = 1 - Σ x^i
        let coframe = DMatrix::from_fn(m, m, |k, i| spec.b[k].0[i] - spec.b[k].0[n - 1]);
        FrameMatrix::new(frame.clone())?;
        CoframeMatrix::new(coframe.clone())?;
        Ok(Self { spec, frame, coframe })
    }

    /// Chart for `Δ_n` with the standard frame spec.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(SimplexFrameSpec::standard(n)?)
    }

    pub fn spec(&self) -> &SimplexFrameSpec {
        &self.spec
    }

    /// Number of outcomes `n` (the chart dimension is `n - 1`).
    pub fn outcomes(&self) -> usize {
        self.spec.n
    }

    pub fn probabilities(&self, x: &ChartPoint) -> Result<ProbabilityVector> {
        if x.dim() != self.spec.n - 1 {
            return Err(GeometryError::DimensionMismatch { expected: self.spec.n - 1, got: x.dim() });
        }
        ProbabilityVector::from_chart(x)
    }

    /// Chart components of the gradient frame, from the closed form.
    pub fn exponential_frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        let p = self.probabilities(x)?;
        let ambient = exponential_gradient_frame(&self.spec, &p)?;
        let m = self.spec.n - 1;
        FrameMatrix::new(ambient.rows(0, m).into_owned())
    }

    fn ambient_last(x: &ChartPoint) -> f64 {
        1.0 - x.coords().sum()
    }
}

impl ManifoldChart for SimplexChart {
    fn dim(&self) -> usize {
        self.spec.n - 1
    }

    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == self.dim()
            && x.coords().iter().all(|v| *v > POSITIVITY_MARGIN && v.is_finite())
            && Self::ambient_last(x) > POSITIVITY_MARGIN
    }

    fn metric_at(&self, x: &ChartPoint) -> Result<MetricMatrix> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        let m = self.dim();
        let last = 1.0 / Self::ambient_last(x);
        let c = x.coords();
        MetricMatrix::new(DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                1.0 / c[i] + last
            } else {
                last
            }
        }))
    }

    fn frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        FrameMatrix::new(self.frame.clone())
    }

    fn coframe_at(&self, x: &ChartPoint) -> Result<CoframeMatrix> {
        if !self.is_valid(x) {
            return Err(GeometryError::InvalidPoint);
        }
        CoframeMatrix::new(self.coframe.clone())
    }

    /// Symmetric Dirichlet(1), rejection-sampled to the positivity margin.
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        let n = self.spec.n;
        loop {
            let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = w.iter().sum();
            let x = ChartPoint::new(w[..n - 1].iter().map(|v| v / total).collect());
            if self.is_valid(&x) {
                return x;
            }
        }
    }

    /// Moving along `axis` trades `p^axis` against `p^n`; the smaller of the two sets the scale.
    fn length_scale(&self, x: &ChartPoint, axis: usize) -> f64 {
        x.coords()[axis].min(Self::ambient_last(x)).max(POSITIVITY_MARGIN)
    }
}

/// Velocity at `t = 0` of [`exponential_geodesic`], `((v^j - p · v) p^j)_j`.
pub fn exponential_initial_velocity(p: &ProbabilityVector, v: &[f64]) -> Result<SimplexTangent> {
    if v.len() != p.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: v.len() });
    }
    let mean = p.dot(v);
    Ok(SimplexTangent(v.iter().zip(&p.0).map(|(v, p)| (v - mean) * p).collect()))
}

/// Chart components of an ambient tangent.
pub fn tangent_to_chart(v: &SimplexTangent) -> DVector<f64> {
    DVector::from_column_slice(&v.0[..v.0.len() - 1])
}
