use thiserror::Error;

/// Errors raised by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "magnitude overflow: result needs at least {} bits, cap is {max_bits}",
        show_bits(*.required_bits)
    )]
    MagnitudeOverflow { required_bits: u64, max_bits: u64 },

    #[error("insufficient terms: need {needed}, have {available}")]
    InsufficientTerms { needed: usize, available: usize },

    #[error("interval too wide: {0}")]
    IntervalTooWide(String),

    #[error("invalid approximation order: {0}")]
    InvalidOmega(String),

    #[error("invalid beta: {0}")]
    InvalidBeta(String),

    #[error("beta bracket cannot certify binary digit {digit} of 1 - 1/beta")]
    BetaNotCertifiable { digit: u64 },

    #[error("value is rational; irrationality measures are undefined")]
    RationalValue,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Lower bounds past `u64` are stored saturated.
fn show_bits(bits: u64) -> String {
    if bits == u64::MAX {
        "2^64".to_string()
    } else {
        bits.to_string()
    }
}
