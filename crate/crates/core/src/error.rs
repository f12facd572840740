use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("error budget exhausted: {0}")]
    Budget(String),

    #[error("enumeration limit exceeded: {0}; use asymptotic mode")]
    EnumerationLimit(String),

    #[error("no typical maximally entangled factor at this gamma, N (d = {d})")]
    NoTypicalFactor { d: f64 },

    #[error("empty typical set: {0}")]
    EmptyTypicalSet(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
