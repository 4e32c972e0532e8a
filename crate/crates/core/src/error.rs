use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point lies outside the valid chart region")]
    InvalidPoint,

    #[error("frame is singular (condition number {0:.3e})")]
    SingularFrame(f64),

    #[error("metric is singular or not positive definite (condition number {0:.3e})")]
    SingularMetric(f64),

    #[error("metric is not symmetric (relative asymmetry {0:.3e})")]
    AsymmetricMetric(f64),

    #[error("curve left the manifold at t = {0}")]
    LeftManifold(f64),

    #[error("need at least {needed} path samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("invalid differentiation config: {0}")]
    Config(String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not a faithful density matrix: {0}")]
    InvalidState(String),

    #[error("not a traceless Hermitian tangent: {0}")]
    InvalidTangent(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
