use thiserror::Error;

/// Errors raised while configuring or running a simulation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("unsupported bandwidth: {0} Hz (expected one of 1.4, 3, 5, 10, 15, 20 MHz)")]
    UnsupportedBandwidth(f64),

    #[error("cqi {0} out of range 1..=15")]
    CqiOutOfRange(u8),

    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("cannot aggregate reports: {0}")]
    MixedReports(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl SimError {
    pub(crate) fn invalid(key: &str, message: impl Into<String>) -> Self {
        SimError::InvalidValue {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
