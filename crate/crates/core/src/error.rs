use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The physical configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An index or quantum number lies outside its allowed range.
    #[error("{what} = {value} is out of range (must be < {limit})")]
    Range {
        what: String,
        value: usize,
        limit: usize,
    },

    /// A state could not be normalized because all weights vanish.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e}, allowed {allowed:e})")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("invalid bipartition: {0}")]
    Bipartition(String),
}

impl Error {
    /// `true` for failures of the numerical kernels rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotHermitian { .. } | Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
