use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("construction unsupported: {0}")]
    Unsupported(String),
    #[error("not a Cartan involution: {0}")]
    NotCartanInvolution(String),
    #[error("complement undefined: {0}")]
    ComplementUndefined(String),
    #[error("indefinite metric: {0}")]
    IndefiniteMetric(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(alloc::format!($($arg)*)) };
}
pub(crate) use input_err;
