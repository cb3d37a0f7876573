use alloc::string::String;
use core::fmt;

/// Errors produced by the decoding core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidArgument(String),
    /// A guard against exponential blow-up was tripped.
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },
    /// Randomized construction gave up after its retry budget.
    Construction(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Capacity {
                what,
                limit,
                requested,
            } => write!(f, "{what} limited to {limit}, got {requested}"),
            Error::Construction(msg) => write!(f, "construction failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
