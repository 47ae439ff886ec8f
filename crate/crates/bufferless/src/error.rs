use std::io;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("missing required key `{0}`")]
    Missing(&'static str),

    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },

    #[error("keys `{0}` and `{1}` are mutually exclusive")]
    Conflict(&'static str, &'static str),

    #[error("config: {0}")]
    Parse(String),

    #[error("sweep point {index} ({name} = {value}): {source}")]
    Point {
        index: usize,
        name: &'static str,
        value: f64,
        #[source]
        source: Box<HarnessError>,
    },

    #[error(transparent)]
    Core(#[from] bufferless_core::Error),

    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl HarnessError {
    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Invalid { key: key.into(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
