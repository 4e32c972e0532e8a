//! Scenario configuration: JSON schema, defaults and validation.
//!
//! ```json
//! {
//!   "manifold": {"quantum": 2},
//!   "metric": {"preset": "deformed", "kappa": 0.25},
//!   "samples": 100, "seed": 1, "fd_step": 1e-5, "tolerance": 1e-5,
//!   "suites": ["duality", "torsion"],
//!   "output": {"path": "report.json", "format": "json"}
//! }
//! ```
//!
//! `metric` may also be the bare string `"fisher_rao"` (simplex only). When it is missing the
//! simplex gets Fisher-Rao and quantum states get BKM. An empty or missing `suites` list
//! selects every suite that applies to the manifold.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use teleparallel::quantum::MonotoneFunction;
use teleparallel::DiffConfig;
use thiserror::Error;

use crate::report::Format;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_FD_STEP: f64 = 1e-5;
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

const MAX_SIMPLEX: usize = 64;
const MAX_QUANTUM: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldSpec {
    /// Open simplex of probability vectors with `n` outcomes.
    Simplex(usize),
    /// Faithful states on a Hilbert space of dimension `dim`.
    Quantum(usize),
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldSpec::Simplex(n) => write!(f, "simplex({n})"),
            ManifoldSpec::Quantum(d) => write!(f, "quantum({d})"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum MetricSpec {
    FisherRao,
    Petz(MonotoneFunction),
}

impl MetricSpec {
    pub fn name(&self) -> String {
        match self {
            MetricSpec::FisherRao => "fisher_rao".into(),
            MetricSpec::Petz(f) => f.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Torsion,
    Curvature,
    AmariSymmetry,
    Geodesic,
    Reduction,
    PetzIdentity,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Duality,
        Suite::Torsion,
        Suite::Curvature,
        Suite::AmariSymmetry,
        Suite::Geodesic,
        Suite::Reduction,
        Suite::PetzIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Torsion => "torsion",
            Suite::Curvature => "curvature",
            Suite::AmariSymmetry => "amari-symmetry",
            Suite::Geodesic => "geodesic",
            Suite::Reduction => "reduction",
            Suite::PetzIdentity => "petz-identity",
        }
    }

    pub fn applies_to(self, m: ManifoldSpec) -> bool {
        !(self == Suite::PetzIdentity && matches!(m, ManifoldSpec::Simplex(_)))
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub manifold: ManifoldSpec,
    pub metric: MetricSpec,
    pub samples: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub tolerance: f64,
    pub suites: Vec<Suite>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ScenarioConfig {
    pub fn label(&self) -> String {
        format!("{}+{}", self.manifold, self.metric.name())
    }

    pub fn diff_config(&self) -> DiffConfig {
        DiffConfig::with_step(self.fd_step).expect("step validated at parse time")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    manifold: RawManifold,
    metric: Option<RawMetric>,
    samples: Option<i64>,
    seed: Option<u64>,
    fd_step: Option<f64>,
    tolerance: Option<f64>,
    suites: Option<Vec<String>>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawManifold {
    Simplex(usize),
    Quantum(usize),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMetric {
    Name(String),
    Preset { preset: String, kappa: Option<f64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<String>,
}

fn metric_from(name: &str, kappa: Option<f64>, manifold: ManifoldSpec) -> Result<MetricSpec, ConfigError> {
    let quantum = matches!(manifold, ManifoldSpec::Quantum(_));
    let bad = |e: teleparallel::GeometryError| field("metric.kappa", e.to_string());
    let no_kappa = |m: MetricSpec| match kappa {
        Some(_) => Err(field("metric.kappa", format!("preset `{name}` takes no kappa"))),
        None => Ok(m),
    };
    let metric = match name {
        "fisher_rao" => no_kappa(MetricSpec::FisherRao)?,
        "bkm" => MetricSpec::Petz(MonotoneFunction::bkm_scaled(kappa.unwrap_or(1.0)).map_err(bad)?),
        "bures" => no_kappa(MetricSpec::Petz(MonotoneFunction::bures()))?,
        "wigner_yanase" => no_kappa(MetricSpec::Petz(MonotoneFunction::wigner_yanase()))?,
        "deformed" => {
            let k = kappa.ok_or_else(|| field("metric.kappa", "preset `deformed` needs kappa in (0, 1]"))?;
            MetricSpec::Petz(MonotoneFunction::deformed(k).map_err(bad)?)
        }
        other => return Err(field("metric.preset", format!("unknown preset `{other}`"))),
    };
    match (&metric, quantum) {
        (MetricSpec::FisherRao, true) => Err(field("metric", "fisher_rao applies to the simplex only")),
        (MetricSpec::Petz(_), false) => Err(field("metric", format!("`{name}` applies to quantum states only"))),
        _ => Ok(metric),
    }
}

/// Parses and validates a scenario, filling defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let manifold = match raw.manifold {
        RawManifold::Simplex(n) if (2..=MAX_SIMPLEX).contains(&n) => ManifoldSpec::Simplex(n),
        RawManifold::Simplex(n) => {
            return Err(field("manifold.simplex", format!("need 2..={MAX_SIMPLEX} outcomes, got {n}")))
        }
        RawManifold::Quantum(d) if (2..=MAX_QUANTUM).contains(&d) => ManifoldSpec::Quantum(d),
        RawManifold::Quantum(d) => {
            return Err(field("manifold.quantum", format!("need dimension 2..={MAX_QUANTUM}, got {d}")))
        }
    };

    let metric = match raw.metric {
        None => match manifold {
            ManifoldSpec::Simplex(_) => MetricSpec::FisherRao,
            ManifoldSpec::Quantum(_) => MetricSpec::Petz(MonotoneFunction::bkm()),
        },
        Some(RawMetric::Name(name)) => metric_from(&name, None, manifold)?,
        Some(RawMetric::Preset { preset, kappa }) => metric_from(&preset, kappa, manifold)?,
    };

    let samples = match raw.samples {
        None => DEFAULT_SAMPLES,
        Some(s) if s >= 1 => s as usize,
        Some(s) => return Err(field("samples", format!("must be at least 1, got {s}"))),
    };

    let tolerance = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(field("tolerance", format!("must be positive, got {tolerance}")));
    }

    let fd_step = raw.fd_step.unwrap_or(DEFAULT_FD_STEP);
    DiffConfig::with_step(fd_step).map_err(|e| field("fd_step", e.to_string()))?;

    let mut suites = Vec::new();
    for name in raw.suites.unwrap_or_default() {
        let suite: Suite = name.parse().map_err(|m: String| field("suites", m))?;
        if !suite.applies_to(manifold) {
            return Err(field("suites", format!("suite `{name}` does not apply to {manifold}")));
        }
        if !suites.contains(&suite) {
            suites.push(suite);
        }
    }
    if suites.is_empty() {
        suites = Suite::ALL.into_iter().filter(|s| s.applies_to(manifold)).collect();
    }
    suites.sort();

    let (output, format) = match raw.output {
        None => (None, None),
        Some(o) => {
            let format = o
                .format
                .map(|f| f.parse::<Format>().map_err(|m| field("output.format", m)))
                .transpose()?;
            (o.path, format)
        }
    };

    Ok(ScenarioConfig {
        manifold,
        metric,
        samples,
        seed: raw.seed.unwrap_or(0),
        fd_step,
        tolerance,
        suites,
        output,
        format,
    })
}
