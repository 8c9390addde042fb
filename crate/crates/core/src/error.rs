use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while configuring, generating, or validating a dataset.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its domain (e.g. a Bézier parameter outside `[0, 1]`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The configuration cannot describe a valid dataset.
    #[error("configuration error: {0}")]
    Config(String),

    /// Rejection sampling gave up after `tries` candidates.
    #[error("sampling exhausted after {tries} tries")]
    SamplingExhausted { tries: usize },

    /// A primitive could not be placed inside its domain.
    #[error("generation failed for {context}: {reason}")]
    GenerationFailed { context: String, reason: String },

    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("decode error: {0}")]
    Decode(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Attach a context string to a generation or sampling failure.
    pub fn with_context(self, context: impl Into<String>) -> Self {
        match self {
            Error::SamplingExhausted { tries } => Error::GenerationFailed {
                context: context.into(),
                reason: format!("sampling exhausted after {tries} tries"),
            },
            Error::GenerationFailed {
                context: inner,
                reason,
            } => Error::GenerationFailed {
                context: format!("{}: {inner}", context.into()),
                reason,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
