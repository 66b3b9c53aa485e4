use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative phasor magnitude {0}")]
    NegativeMagnitude(f64),

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("zero current: {0}")]
    ZeroCurrent(&'static str),

    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("sample time {got} s precedes previous sample at {prev} s")]
    TimeRegression { prev: f64, got: f64 },

    #[error(
        "algebraic loop failed to converge on {failed} of {total} steps \
         (first at t = {first_t} s, residual {residual:e} p.u.)"
    )]
    NonConvergence {
        failed: usize,
        total: usize,
        first_t: f64,
        residual: f64,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by the solver or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NegativeMagnitude(_)
                | Error::Invalid { .. }
                | Error::NonPositiveStep(_)
                | Error::Parse { .. }
                | Error::UnknownPreset(_)
                | Error::TimeRegression { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
