use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("face decomposition failed on face {face}: {reason}")]
    Decomposition { face: usize, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("grid resolution too coarse: {0}")]
    Resolution(String),

    #[error("eigensolver did not converge after {iterations} expansions (worst relative residual {worst_residual:.3e})")]
    Convergence {
        iterations: usize,
        worst_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("value {lambda} lies outside the certified range of the spectrum (certified up to {limit})")]
    Range { lambda: f64, limit: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),

    #[error("domain file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
