use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series coefficient or denominator hit (or came within tolerance of) a pole.
    #[error("pole: {0}; perturb the offending parameter by about 1e-4")]
    Pole(String),

    /// A materialized term or partial sum does not fit in an f64.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The truncated power series cannot be trusted at this argument.
    #[error("series unreliable at {argument}: {reason}")]
    Unreliable { argument: f64, reason: String },

    /// A parameter record violates its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Unknown turbulence regime name.
    #[error("unknown turbulence regime `{0}` (expected strong, moderate or weak)")]
    UnknownRegime(String),

    /// Root bracketing failed for the required-SNR search.
    #[error("target {target:e} is not crossed within [{lo_db}, {hi_db}] dB: {detail}")]
    Bracket {
        target: f64,
        lo_db: f64,
        hi_db: f64,
        detail: String,
    },
}

impl Error {
    pub fn is_unreliable(&self) -> bool {
        matches!(self, Error::Unreliable { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
