use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for record of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("no qualifying start point found in record")]
    StartNotFound,

    #[error("query time {t:e} s lies within the guard band of a wave arrival")]
    Discontinuity { t: f64 },

    #[error("record exhausted: {needed} samples requested from index {start}, record has {len}")]
    RecordExhausted {
        start: usize,
        needed: usize,
        len: usize,
    },

    #[error("averaging window of {window} samples does not fit a series of {len} samples")]
    WindowTooLong { window: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Rejects NaN, infinities and values `<= 0`.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}
