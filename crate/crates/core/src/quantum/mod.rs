//! Faithful density matrices with Petz monotone metrics.
//!
//! Coordinates use a traceless Hermitian basis normalised to `Tr(σ_j σ_k) = δ_jk`
//! (generalised Gell-Mann matrices divided by `√2`). For a qubit this is `σ_k = P_k/√2` with
//! `P_k` the Pauli matrices, so Bloch coordinates `r_k = Tr(ρ P_k)` relate to chart coordinates
//! by `r_k = √2 x^k`.

mod basis;
mod chart;
mod geodesic;
mod monotone;
pub mod spectral;
mod state;
mod superop;

pub use basis::HermitianBasis;
pub use chart::QuantumChart;
pub use geodesic::{bkm_geodesic, deformed_geodesic, mixture_geodesic, random_unitary, unitary_action};
pub use monotone::{MonotoneFunction, MonotoneKind};
pub use spectral::CMatrix;
pub use state::{DensityState, TangentMatrix, STATE_FLOOR};
pub use superop::{apply_k, apply_tf, gradient_field, metric_gf, multipliers, Superoperator};
