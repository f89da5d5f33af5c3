use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad class of a failure, used by front ends to map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Domain,
    Accuracy,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: quadrature did not reach tolerance (estimate {estimate:e}, error {error:e})")]
    Accuracy { context: String, estimate: f64, error: f64 },

    #[error("window function nearly vanishes at xi = {xi_ev} eV (|f| = {magnitude:e}, guard {threshold:e})")]
    NearRoot { xi_ev: f64, magnitude: f64, threshold: f64 },

    #[error("separations not matched between theory and experiment: {unmatched:?}")]
    Alignment { unmatched: Vec<f64> },

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("grid point {index}: {source}")]
    AtGridPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn file(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::File {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::File { .. } | Error::Io(_) | Error::Config(_) => ErrorClass::Parse,
            Error::Accuracy { .. } => ErrorClass::Accuracy,
            Error::AtGridPoint { source, .. } => source.class(),
            Error::Domain(_) | Error::Validation(_) | Error::NearRoot { .. } | Error::Alignment { .. } => {
                ErrorClass::Domain
            }
        }
    }
}
