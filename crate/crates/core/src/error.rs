use thiserror::Error;

/// Failure classes shared by every operation in the crate.
///
/// The four variants mirror the exit codes of the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input or mixing incompatible objects (different primes, fields, sizes).
    #[error("usage error: {0}")]
    Usage(String),
    /// A mathematical precondition does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// The stored precision cannot certify the requested answer.
    #[error("precision error: {0}")]
    Precision(String),
    /// A series failed its convergence monitor.
    #[error("convergence error: {0}")]
    Convergence(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::Convergence(_) => "convergence",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Usage(m) | Error::Domain(m) | Error::Precision(m) | Error::Convergence(m) => m,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! usage {
    ($($arg:tt)*) => { $crate::error::Error::Usage(format!($($arg)*)) };
}
macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! precision {
    ($($arg:tt)*) => { $crate::error::Error::Precision(format!($($arg)*)) };
}
macro_rules! convergence {
    ($($arg:tt)*) => { $crate::error::Error::Convergence(format!($($arg)*)) };
}
pub(crate) use {convergence, domain, precision, usage};
