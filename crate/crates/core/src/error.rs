use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid dimension {0}: need N >= 2")]
    InvalidDimension(usize),

    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("zero vector cannot represent a symbol")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid bit labels: {0}")]
    InvalidLabels(String),

    #[error("constellation has no bit labels")]
    MissingLabels,

    #[error("argument outside the domain of {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("I0({0}) overflows; use the scaled form")]
    Overflow(f64),

    #[error("coincident symbols {0} and {1}")]
    CoincidentPoints(usize, usize),

    #[error("target {target:e} unreachable in [{lo_db}, {hi_db}] dB")]
    TargetUnreachable { target: f64, lo_db: f64, hi_db: f64 },

    #[error("descent diverged: step underflow at iteration {0}")]
    Divergence(usize),

    #[error("SIC search did not converge (best residual {best_residual:e})")]
    NoConvergence { best_residual: f64 },

    #[error("numerical fault: {0}")]
    Numerical(String),

    #[error("malformed constellation file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
