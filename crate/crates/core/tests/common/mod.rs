//! Small charts with closed-form geometry, used as oracles.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, RngCore};
use teleparallel::{ChartPoint, CoframeMatrix, FrameMatrix, ManifoldChart, MetricMatrix, Result};

/// `R^n` with the Euclidean metric and the coordinate frame.
pub struct Flat(pub usize);

impl ManifoldChart for Flat {
    fn dim(&self) -> usize {
        self.0
    }
    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == self.0 && x.coords().iter().all(|v| v.is_finite())
    }
    fn metric_at(&self, _x: &ChartPoint) -> Result<MetricMatrix> {
        Ok(MetricMatrix::identity(self.0))
    }
    fn frame_at(&self, _x: &ChartPoint) -> Result<FrameMatrix> {
        Ok(FrameMatrix::identity(self.0))
    }
    fn coframe_at(&self, _x: &ChartPoint) -> Result<CoframeMatrix> {
        Ok(CoframeMatrix::identity(self.0))
    }
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        ChartPoint::new((0..self.0).map(|_| rng.random_range(-1.0..1.0)).collect())
    }
}

/// The line with frame `X = e^x ∂_x` and coframe `θ = e^{-x} dx`.
pub struct ExpLine;

impl ManifoldChart for ExpLine {
    fn dim(&self) -> usize {
        1
    }
    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == 1 && x.coords()[0].abs() < 10.0
    }
    fn metric_at(&self, _x: &ChartPoint) -> Result<MetricMatrix> {
        Ok(MetricMatrix::identity(1))
    }
    fn frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        FrameMatrix::new(DMatrix::from_element(1, 1, x.coords()[0].exp()))
    }
    fn coframe_at(&self, x: &ChartPoint) -> Result<CoframeMatrix> {
        CoframeMatrix::new(DMatrix::from_element(1, 1, (-x.coords()[0]).exp()))
    }
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        ChartPoint::new(vec![rng.random_range(-2.0..2.0)])
    }
}

/// The plane with `X_1 = ∂_1`, `X_2 = e^{x^1} ∂_2`, so `[X_1, X_2] = X_2`, dual coframe
/// `θ^1 = dx^1`, `θ^2 = e^{-x^1} dx^2` and metric `diag(1, 1 + (x^1)²)`.
pub struct Twisted;

impl ManifoldChart for Twisted {
    fn dim(&self) -> usize {
        2
    }
    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == 2 && x.coords().iter().all(|v| v.abs() < 5.0)
    }
    fn metric_at(&self, x: &ChartPoint) -> Result<MetricMatrix> {
        let a = x.coords()[0];
        MetricMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0 + a * a]))
    }
    fn frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix> {
        FrameMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, x.coords()[0].exp()]))
    }
    fn coframe_at(&self, x: &ChartPoint) -> Result<CoframeMatrix> {
        CoframeMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, (-x.coords()[0]).exp()]))
    }
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        ChartPoint::new(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
    }
}

/// The unit sphere in `(θ, φ)` with `G = diag(1, sin²θ)`; its Levi-Civita connection is curved.
pub struct Sphere;

impl ManifoldChart for Sphere {
    fn dim(&self) -> usize {
        2
    }
    fn is_valid(&self, x: &ChartPoint) -> bool {
        x.dim() == 2 && x.coords()[0] > 0.1 && x.coords()[0] < 3.0
    }
    fn metric_at(&self, x: &ChartPoint) -> Result<MetricMatrix> {
        let s = x.coords()[0].sin();
        MetricMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, s * s]))
    }
    fn frame_at(&self, _x: &ChartPoint) -> Result<FrameMatrix> {
        Ok(FrameMatrix::identity(2))
    }
    fn coframe_at(&self, _x: &ChartPoint) -> Result<CoframeMatrix> {
        Ok(CoframeMatrix::identity(2))
    }
    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint {
        ChartPoint::new(vec![rng.random_range(0.5..2.6), rng.random_range(0.0..6.0)])
    }
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
