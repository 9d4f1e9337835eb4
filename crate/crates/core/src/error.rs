use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("arc between the points is ambiguous (antipodal within tolerance)")]
    AmbiguousArc,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("truncation unsound: {fraction:.3e} of paths hit the step cap")]
    TruncationUnsound { fraction: f64 },
    #[error("no sampled element passed the membership filter")]
    EmptyFilter,
    #[error("adaptive quadrature exceeded {nodes} nodes")]
    QuadratureFailure { nodes: usize },
}

pub type Result<T> = std::result::Result<T, LabError>;
