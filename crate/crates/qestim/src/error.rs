use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad input: a malformed file, an out-of-range value or an unusable
    /// parameter. `field` names the offender.
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error(transparent)]
    Core(#[from] qestim_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

impl HarnessError {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        HarnessError::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the error is the caller's fault rather than the
    /// environment's. The CLI maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        match self {
            HarnessError::Validation { .. } | HarnessError::Json(_) => true,
            HarnessError::Core(e) => !matches!(e, qestim_core::Error::IndexOutOfRange { .. }),
            HarnessError::Csv(e) => !matches!(e.kind(), csv::ErrorKind::Io(_)),
            HarnessError::Io { .. } | HarnessError::Write(_) => false,
        }
    }
}
