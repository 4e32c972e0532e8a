use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

/// Frames and metrics with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Ratio of extreme singular values; `inf` for a singular matrix.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `b - Σ a_i y_i` accumulated with error-free transformations (two-product by FMA, two-sum).
fn compensated_residual<'a>(b: f64, terms: impl Iterator<Item = (&'a f64, &'a f64)>) -> f64 {
    let (mut sum, mut comp) = (b, 0.0);
    for (a, y) in terms {
        let p = -a * y;
        let perr = (-a).mul_add(*y, -p);
        let t = sum + p;
        let z = t - sum;
        comp += (sum - (t - z)) + (p - z) + perr;
        sum = t;
    }
    sum + comp
}

/// Chart coordinates of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint(DVector<f64>);

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(DVector::from_vec(coords))
    }

    pub fn from_vector(coords: DVector<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The point moved by `h` along coordinate axis `axis`.
    pub fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut c = self.0.clone();
        c[axis] += h;
        Self(c)
    }

    /// The point moved by `h * direction`.
    pub fn displaced(&self, direction: &DVector<f64>, h: f64) -> Self {
        Self(&self.0 + direction * h)
    }
}

/// Column `a` holds the chart components of frame vector `X_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix(DMatrix<f64>);

impl FrameMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(GeometryError::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let cond = condition_number(&entries);
        if !(cond <= MAX_CONDITION) {
            return Err(GeometryError::SingularFrame(cond));
        }
        Ok(Self(entries))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn column(&self, a: usize) -> DVector<f64> {
        self.0.column(a).into_owned()
    }

    pub fn condition(&self) -> f64 {
        condition_number(&self.0)
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.0
            .clone()
            .try_inverse()
            .ok_or(GeometryError::SingularFrame(f64::INFINITY))
    }
}

/// Row `j` holds the chart components of the one-form `θ^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoframeMatrix(DMatrix<f64>);

impl CoframeMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(GeometryError::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let cond = condition_number(&entries);
        if !(cond <= MAX_CONDITION) {
            return Err(GeometryError::SingularFrame(cond));
        }
        Ok(Self(entries))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `Θ E`, entry `(j, k) = θ^j(X_k)`.
    pub fn pairing(&self, frame: &FrameMatrix) -> DMatrix<f64> {
        &self.0 * frame.matrix()
    }
}

/// Symmetric positive definite metric in chart components.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix(DMatrix<f64>);

impl MetricMatrix {
    /// Validates symmetry (1e-12 relative), positive definiteness and conditioning.
    /// The stored matrix is the exact symmetrisation of the input.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(GeometryError::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let scale = entries.amax();
        if !scale.is_finite() || scale == 0.0 {
            return Err(GeometryError::SingularMetric(f64::INFINITY));
        }
        let asym = (&entries - entries.transpose()).amax() / scale;
        if asym > 1e-12 {
            return Err(GeometryError::AsymmetricMetric(asym));
        }
        let sym = (&entries + entries.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigenvalues();
        let (min, max) = (eig.min(), eig.max());
        if min <= 0.0 {
            return Err(GeometryError::SingularMetric(f64::INFINITY));
        }
        if max / min > MAX_CONDITION {
            return Err(GeometryError::SingularMetric(max / min));
        }
        Ok(Self(sym))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `G(u, v)`.
    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.0 * v)[(0, 0)]
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.0
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or(GeometryError::SingularMetric(f64::INFINITY))
    }

    /// Solves `G y = rhs` column by column.
    ///
    /// Cholesky alone loses accuracy in proportion to the conditioning of `G`, which is large near
    /// the boundary of both shipped manifolds. One refinement step with the residual accumulated
    /// in compensated arithmetic brings the solution close to correctly rounded. A residual taken in
    /// plain arithmetic would be pure rounding noise and make the result rough in `x`.
    pub fn solve(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let chol = self.0.clone().cholesky().ok_or(GeometryError::SingularMetric(f64::INFINITY))?;
        let y = chol.solve(rhs);
        let residual = DMatrix::from_fn(rhs.nrows(), rhs.ncols(), |i, c| {
            compensated_residual(rhs[(i, c)], self.0.row(i).iter().zip(y.column(c).iter()))
        });
        Ok(y + chol.solve(&residual))
    }
}

/// Dense `n×n×n` array, row-major in `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Array3 {
    n: usize,
    data: Vec<f64>,
}

impl Array3 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { n, data }
    }

    /// Row-major buffer with explicit dimension.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n * n {
            return Err(GeometryError::DimensionMismatch { expected: n * n * n, got: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        self.data[(i * self.n + j) * self.n + k] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "shape mismatch");
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Dense `n×n×n×n` array, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Array4 {
    n: usize,
    data: Vec<f64>,
}

impl Array4 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, value: f64) {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `Γ^i_{jk}`, component `i` of `∇_{∂_j} ∂_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    gamma: Array3,
}

impl ConnectionCoefficients {
    pub fn zeros(n: usize) -> Self {
        Self { gamma: Array3::zeros(n) }
    }

    pub fn from_array(gamma: Array3) -> Self {
        Self { gamma }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        Self { gamma: Array3::from_fn(n, f) }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma.get(i, j, k)
    }

    pub fn array(&self) -> &Array3 {
        &self.gamma
    }

    /// `Γ^i_{jk} u^j w^k`.
    pub fn contract(&self, u: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += self.get(i, j, k) * u[j] * w[k];
                }
            }
            s
        })
    }

    /// `(Γ_j w)^i = Γ^i_{jk} w^k`, the connection term of `∇_{∂_j} W`.
    pub fn along(&self, j: usize, w: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(n, |i, _| (0..n).map(|k| self.get(i, j, k) * w[k]).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.gamma.max_abs_diff(&other.gamma)
    }

    pub fn is_finite(&self) -> bool {
        self.gamma.is_finite()
    }
}

/// Covariant (0,3) tensor `T(∂_i, ∂_j, ∂_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    t: Array3,
}

impl Tensor3 {
    pub fn from_array(t: Array3) -> Self {
        Self { t }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        Self { t: Array3::from_fn(n, f) }
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t.get(i, j, k)
    }

    pub fn array(&self) -> &Array3 {
        &self.t
    }

    pub fn max_abs(&self) -> f64 {
        self.t.max_abs()
    }
}

/// Finite-difference settings.
///
/// `step` is relative: the stencil half-width at `x` on axis `a` is
/// `step * min(1, length_scale(x, a))`, so the stencil shrinks with the distance to the chart
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub step: f64,
    pub richardson: bool,
    /// RK4 steps per unit of curve parameter.
    pub ode_steps: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self { step: 1e-5, richardson: false, ode_steps: 1000 }
    }
}

impl DiffConfig {
    pub fn new(step: f64, richardson: bool, ode_steps: usize) -> Result<Self> {
        let cfg = Self { step, richardson, ode_steps };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_step(step: f64) -> Result<Self> {
        Self::new(step, false, 1000)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-9..=1e-2).contains(&self.step) {
            return Err(GeometryError::Config(format!(
                "step {} outside [1e-9, 1e-2]",
                self.step
            )));
        }
        if self.ode_steps < 10 {
            return Err(GeometryError::Config(format!("ode_steps {} < 10", self.ode_steps)));
        }
        Ok(())
    }

    /// Step for differentiating quantities that are themselves finite differences: wider, and
    /// extrapolated so the wider step costs no accuracy.
    pub(crate) fn outer(&self) -> Self {
        Self { step: (self.step * 100.0).min(1e-2), richardson: true, ..*self }
    }
}
