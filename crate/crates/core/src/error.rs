use alloc::string::String;
use core::fmt;

/// Errors raised by the library.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the operation's domain (zero where a
    /// positive integer is required, an odd number given to an even-only
    /// index, ...).
    Domain(String),
    /// A strategy was asked to run where it is known to be unsound.
    StrategyRefused(String),
    /// A configured bound was exceeded.
    Config(String),
    /// A trace was handed to the renderer without passing the kernel.
    RenderRefused(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::StrategyRefused(m) => write!(f, "strategy refused: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::RenderRefused(m) => write!(f, "render refused: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
