use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {actual}")]
    Dimension { min: usize, actual: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("delay-Doppler grid {doppler_bins}x{delay_bins} does not tile {n} subcarriers")]
    GridMismatch {
        n: usize,
        doppler_bins: usize,
        delay_bins: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty search range [{lower}, {upper}]")]
    EmptySearchRange { lower: f64, upper: f64 },

    #[error("channel matrix is singular or ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
