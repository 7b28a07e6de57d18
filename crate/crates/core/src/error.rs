use thiserror::Error;

/// Errors reported by the library.
///
/// Everything except [`Error::Format`] is a usage error: the caller handed
/// in arguments outside an operation's domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("argument index {index} is out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("parameter {name} = {value} must lie in the open interval (0, 1)")]
    Parameter { name: &'static str, value: f64 },

    #[error("arity {arity} exceeds the limit of {limit} for {what}")]
    Capacity {
        what: &'static str,
        arity: usize,
        limit: usize,
    },

    #[error("malformed truth table: {0}")]
    Format(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_arity(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected, actual })
    }
}

pub(crate) fn check_cap(what: &'static str, arity: usize, limit: usize) -> Result<()> {
    if arity <= limit {
        Ok(())
    } else {
        Err(Error::Capacity { what, arity, limit })
    }
}

/// Checks that a tester accuracy or confidence parameter lies in (0, 1).
pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter { name, value })
    }
}
