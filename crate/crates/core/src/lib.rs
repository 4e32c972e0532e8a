//! Dual teleparallel (Weitzenböck) connections on parallelizable manifolds.
//!
//! The crate is organised around one chart-level engine and two concrete manifolds:
//!
//! - [`geometry`]: connection coefficients from frames and metrics, torsion, curvature,
//!   the (0,3) tensor `T = G(∇ - ∇^G)`, duality residuals, Lie brackets and geodesics.
//!   Everything is generic over the [`ManifoldChart`] contract.
//! - [`simplex`]: the open probability simplex with the Fisher-Rao metric and the
//!   mixture/exponential frames.
//! - [`quantum`]: faithful density matrices with Petz monotone metrics, the spectral
//!   superoperators `K^f_ρ` and `T^f_ρ`, gradient frames and closed-form geodesics.
//! - [`sweep`]: evaluation over batches of sample points, in parallel when the
//!   `parallel` feature is enabled.
//!
//! Index convention: `Γ^i_{jk}` is component `i` of `∇_{∂_j} ∂_k`. It is used everywhere.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod quantum;
pub mod simplex;
pub mod sweep;

pub use error::{GeometryError, Result};
pub use geometry::{
    ChartPoint, CoframeMatrix, ConnectionCoefficients, DiffConfig, FrameMatrix, ManifoldChart,
    MetricMatrix, Tensor3,
};
