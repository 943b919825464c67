//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by basis construction, propagation, spectral analysis,
/// fitting, and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested size is outside the supported range (chain length caps,
    /// Fibonacci overflow, empty grids).
    #[error("size error: {0}")]
    Size(String),

    /// A bit pattern violates the blockade constraint or exceeds the chain.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Site index outside 1..=L.
    #[error("site {site} out of range for chain of length {l}")]
    SiteRange { site: usize, l: usize },

    /// Argument outside its mathematical domain (angles, thresholds, steps).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects live on different bases or have incompatible lengths.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Norm drift or unitarity violation during time evolution.
    #[error("integration failure: {0}")]
    Integration(String),

    /// Eigendecomposition of the Floquet operator failed its reconstruction
    /// check.
    #[error("decomposition failure: {0}")]
    Decomposition(String),

    /// Fewer than two dominant Floquet states; no arc to measure.
    #[error("no arc: {0}")]
    NoArc(String),

    /// Least-squares fit could not be performed.
    #[error("fit failure: {0}")]
    Fit(String),

    /// Malformed CLI flags or config file.
    #[error("usage error: {0}")]
    Usage(String),

    /// File I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 0 success, 2 usage, 3 integration,
    /// 4 analysis/fit, 5 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_)
            | Error::Size(_)
            | Error::InvalidState(_)
            | Error::SiteRange { .. }
            | Error::Domain(_)
            | Error::DimensionMismatch { .. } => 2,
            Error::Integration(_) => 3,
            Error::Decomposition(_) | Error::NoArc(_) | Error::Fit(_) => 4,
            Error::Io(_) => 5,
        }
    }
}
