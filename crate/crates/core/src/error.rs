use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite argument: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state has no modes")]
    EmptyState,

    #[error("profile is not normalized on the box: measured norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sine truncation residual {residual:e} exceeds threshold {threshold:e}")]
    Truncation { residual: f64, threshold: f64 },

    #[error("quadrature did not converge: panel-refinement delta {delta:e}")]
    Quadrature { delta: f64 },

    #[error("state document: {0}")]
    StateSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
