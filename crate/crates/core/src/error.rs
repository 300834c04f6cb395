use alloc::string::String;
use core::fmt;

/// Errors raised by oracle construction and algorithm configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data is out of range or malformed. `field` names the offender.
    Validation { field: String, reason: String },
    /// The requested operation is not available with the given parameters.
    Configuration(String),
    /// An index lies outside the oracle's domain.
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn configuration(reason: impl Into<String>) -> Self {
        Error::Configuration(reason.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Error::Configuration(reason) => write!(f, "configuration error: {reason}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for domain of size {len}")
            }
        }
    }
}

impl core::error::Error for Error {}
