use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot parse Pauli string {text:?}: {reason}")]
    PauliParse { text: String, reason: String },

    #[error("{what} needs {requested} qubits but the dense cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("invalid code {name:?}: {reason}")]
    InvalidCode { name: String, reason: String },

    #[error("operators {first} and {second} do not commute")]
    NonCommuting { first: String, second: String },

    #[error("perturbation series may diverge: 4 x |V| / gap = {ratio} >= 1")]
    Divergence { ratio: f64 },

    #[error("order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("correctable errors {first} and {second} share a syndrome but act differently")]
    TransversalViolation { first: String, second: String },

    #[error("circuit format: {0}")]
    CircuitFormat(String),

    #[error("json: {0}")]
    Json(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by resource caps or series divergence rather than bad input.
    pub fn is_cap_or_divergence(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::Divergence { .. } | Error::OrderTooLarge { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
