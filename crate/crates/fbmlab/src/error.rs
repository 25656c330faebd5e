//! Crate error type. Variants map onto process exit codes in the CLI:
//! configuration / domain / catalog problems exit 2, numerical blowup exits 3,
//! failed verdicts exit 1 (not an error variant; verdicts live in reports).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid/field shape disagreement (length, dimension, or lattice mismatch).
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Unknown builtin symbol name or invalid symbol parameters.
    #[error("symbol catalog: {0}")]
    Catalog(String),

    /// Invalid configuration; the message names the offending key or the
    /// violated inequality.
    #[error("config error: {0}")]
    Config(String),

    /// Index outside the resolved dyadic band or search range.
    #[error("range error: {0}")]
    Range(String),

    /// A documented precondition failed (support, symmetry, exponent relation).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Picard difference sequence grew for several consecutive iterations.
    #[error("fixed point iteration is not contracting: diff ratio {ratio:.6} at iteration {iteration}")]
    NonContraction { iteration: usize, ratio: f64 },

    /// A coefficient exceeded the blowup threshold or became non-finite.
    /// Carries the last finite state so callers can persist it.
    #[error("numerical blowup at t = {time}")]
    Blowup {
        time: f64,
        last: Option<Box<crate::SpectralField>>,
    },

    /// Malformed snapshot file.
    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("toml parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Blowup { .. } => 3,
            _ => 2,
        }
    }
}
