use thiserror::Error;

/// Errors raised by the coset, formula and dimension layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A scan or enumeration would exceed its configured bound.
    #[error("resource limit exceeded: {what} (bound {bound})")]
    Resource { what: String, bound: u128 },

    /// A closed-form quotient did not divide exactly.
    #[error("inexact division in {formula}: {numerator} is not divisible by {denominator}")]
    Divisibility {
        formula: String,
        numerator: String,
        denominator: String,
    },

    /// A closed-form difference went negative.
    #[error("negative value in {0}")]
    Underflow(String),

    /// Intermediate arithmetic did not fit in the native integer width.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// The modulus is too wide for the residue oracle.
    #[error("n = {0} does not fit in 128 bits; only closed-form evaluation is available")]
    ModulusTooWide(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
