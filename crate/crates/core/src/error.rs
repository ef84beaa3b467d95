use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("ring mismatch: operands live in different charts")]
    RingMismatch,
    #[error("weights must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("UNSUPPORTED_CHARACTERISTIC: operation requires characteristic zero, field has characteristic {0}")]
    UnsupportedCharacteristic(u64),
    #[error("CHART_SPLIT_REQUIRED: {0}")]
    ChartSplitRequired(String),
    #[error("NOT_TERMINATED: no resolution within {0} steps")]
    NotTerminated(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// Process exit code used by the command line front-end and the C API.
    pub fn code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::NonPositiveWeight(_) | Error::NotPrime(_) | Error::UnknownVariable(_) => 2,
            Error::UnsupportedCharacteristic(_) => 3,
            Error::ChartSplitRequired(_) => 4,
            Error::NotTerminated(_) => 5,
            Error::ArityMismatch { .. } | Error::RingMismatch | Error::Precondition(_) => 6,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
