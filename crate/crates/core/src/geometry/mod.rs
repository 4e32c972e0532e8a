//! Chart-level differential geometry for manifolds presented through one global chart.

mod chart;
mod connection;
mod diff;
mod geodesic;
mod tensor;
mod types;

pub use chart::{ConnectionField, FrameField, ManifoldChart};
pub use connection::{
    cross_parallelism_residual, curvature_components, curvature_residual, dual_weitzenbock_pair,
    duality_residual, duality_residuals, frame_bracket_norm, gradient_frame, gradient_frame_at,
    levi_civita_coefficients, lie_bracket, lie_bracket_of, metric_compatibility_residual,
    one_form_differential, torsion_components, weitzenbock_coefficients,
    weitzenbock_coefficients_of, weitzenbock_residual,
};
pub use diff::partial_derivatives;
pub use geodesic::{covariant_acceleration, geodesic_integrate, GeodesicAbort, GeodesicPath};
pub use tensor::{amari_tensor_components, amari_tensor_from_dual, symmetry_defects, SymmetryDefects};
pub use types::{
    condition_number, Array3, Array4, ChartPoint, CoframeMatrix, ConnectionCoefficients,
    DiffConfig, FrameMatrix, MetricMatrix, Tensor3, MAX_CONDITION,
};

/// `value / max(1, scale)`: absolute below unit scale, relative above it.
///
/// Chart components grow like inverse powers of the distance to the boundary (Fisher-Rao
/// entries scale as `1/p`), so residuals of identities whose terms are large are reported
/// relative to the size of those terms.
pub fn scaled_residual(value: f64, scale: f64) -> f64 {
    value.abs() / scale.abs().max(1.0)
}
