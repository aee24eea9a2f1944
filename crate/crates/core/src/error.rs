use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("unsupported matrix dimension {0} (expected 2 or 4)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parameter `{name}` = {value} out of domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate channel: unnormalized output trace {trace:e} is not positive")]
    DegenerateChannel { trace: f64 },

    #[error(
        "state is not X-shaped: |rho[{row},{col}]| = {magnitude:e}; use the numeric variant instead"
    )]
    NotXState {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("no convergence after {iterations} iterations (best value {best})")]
    NoConvergence { iterations: usize, best: f64 },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}
