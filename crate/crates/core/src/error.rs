use thiserror::Error;

/// Errors raised by the numerical kernel, the system model and the identification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("singular matrix: pivot {pivot:e} below floor {floor:e} at column {column}")]
    SingularMatrix {
        column: usize,
        pivot: f64,
        floor: f64,
    },

    #[error("root iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("sampling step is missing or not positive")]
    MissingStep,

    #[error("system kind mismatch: expected a {expected} system")]
    KindMismatch { expected: &'static str },

    #[error("system is not observable: rank(Q) = {rank} < n = {n}")]
    NotObservable { rank: usize, n: usize },

    #[error("insufficient data: need {needed} samples, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("singular Hankel window at k = {window_start}: condition estimate {condition:e}")]
    SingularHankel { window_start: usize, condition: f64 },

    #[error("no order n <= {n_max} explains the series")]
    NoOrderFound { n_max: usize },

    #[error("prediction model has a zero root; logarithm undefined")]
    ZeroRoot,
}

impl Error {
    /// Stable name used in diagnostics and exit-status reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::MissingStep => "MissingStep",
            Error::KindMismatch { .. } => "KindMismatch",
            Error::NotObservable { .. } => "NotObservable",
            Error::InsufficientData { .. } => "InsufficientData",
            Error::SingularHankel { .. } => "SingularHankel",
            Error::NoOrderFound { .. } => "NoOrderFound",
            Error::ZeroRoot => "ZeroRoot",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_err(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}
