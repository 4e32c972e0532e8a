//! Batch verification of dual teleparallel identities on the probability simplex and on
//! faithful quantum states.
//!
//! A scenario ([`config::ScenarioConfig`]) names a manifold, a metric and a list of suites.
//! [`run_suites`] samples seeded points, evaluates each suite per point and collects the raw
//! residuals; [`emit_report`] turns the result into JSON or CSV.

#![forbid(unsafe_code)]

pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_config, ConfigError, ScenarioConfig, Suite};
pub use report::{emit_report, write_report, Format, ReportError};
pub use suites::{run_suites, Record, SuiteSummary, VerificationReport};

/// Metric presets understood by the config parser, with their `f`.
pub fn presets() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        ("fisher_rao", "Σ u_j v_j / p_j", "classical metric on the simplex; the only choice there"),
        ("bkm", "f(x) = κ(x − 1)/ln x, κ = 1 by default", "Bogoliubov-Kubo-Mori; dually flat, torsion-free gradient frame"),
        ("bures", "f(x) = (1 + x)/2", "Bures-Helstrom, the deformed family at κ = 1"),
        ("wigner_yanase", "f(x) = (1 + √x)²/4", "Wigner-Yanase skew information metric"),
        ("deformed", "f(x) = κ(x − 1)(x^κ + 1)/(2(x^κ − 1)), κ ∈ (0, 1]", "deformed family; gradient frame presents torsion"),
    ]
}
