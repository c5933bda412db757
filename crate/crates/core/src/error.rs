use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters or evaluation point outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two routes that must agree (an identity or a dual formula) did not.
    #[error("inconsistent {what}: {first} vs {second}")]
    Inconsistent {
        what: &'static str,
        first: f64,
        second: f64,
    },

    /// A log-magnitude left the range of `f64` after exponentiation.
    #[error("overflow: log-magnitude {ln_abs} exceeds the representable range")]
    Overflow { ln_abs: f64 },

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
