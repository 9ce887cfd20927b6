use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invariant violated ({invariant}): {detail}")]
    Invariant { invariant: String, detail: String },

    #[error("suite `{suite}` is not applicable: {reason}")]
    Inapplicable { suite: String, reason: String },

    #[error("form is not certified to lie in ker rho~: {0}")]
    NotInKernel(String),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("spec carries no twist")]
    MissingTwist,

    #[error("membership undecidable: {0}")]
    Undecidable(String),

    #[error("cochain escape: {0}")]
    CochainEscape(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invariant(invariant: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant: invariant.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
