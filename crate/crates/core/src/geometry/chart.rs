use rand::RngCore;

use super::types::{ChartPoint, CoframeMatrix, ConnectionCoefficients, FrameMatrix, MetricMatrix};
use crate::error::Result;

/// A manifold presented through a single global chart, together with a Riemannian metric,
/// a global frame `{X_a}` and an almost dual coframe `{θ^j}` (`θ^j(X_k)` constant).
pub trait ManifoldChart: Sync {
    fn dim(&self) -> usize;

    fn is_valid(&self, x: &ChartPoint) -> bool;

    fn metric_at(&self, x: &ChartPoint) -> Result<MetricMatrix>;

    fn frame_at(&self, x: &ChartPoint) -> Result<FrameMatrix>;

    fn coframe_at(&self, x: &ChartPoint) -> Result<CoframeMatrix>;

    fn sample(&self, rng: &mut dyn RngCore) -> ChartPoint;

    /// Coordinate length over which the geometry changes appreciably when moving from `x`
    /// along `axis`. Finite-difference stencils on that axis are scaled by it.
    fn length_scale(&self, _x: &ChartPoint, _axis: usize) -> f64 {
        1.0
    }
}

/// A frame field evaluated pointwise.
pub type FrameField<'a> = dyn Fn(&ChartPoint) -> Result<FrameMatrix> + 'a;

/// Connection coefficients evaluated pointwise.
pub type ConnectionField<'a> = dyn Fn(&ChartPoint) -> Result<ConnectionCoefficients> + 'a;
