use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A real parameter fell outside the interval where the operation is defined.
    #[error("{what} = {value} is outside the admissible domain {admissible}")]
    Domain {
        what: &'static str,
        value: f64,
        admissible: String,
    },

    /// The evaluated quantity is exactly zero, so its logarithm is undefined.
    #[error("value vanishes at {0}; logarithm undefined")]
    Vanishing(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A floating result could not honour an exact-integer contract.
    #[error("precision failure: {0}")]
    Precision(String),

    #[error("sampler vanishes at {zeros} of {samples} quadrature nodes")]
    Singular { zeros: usize, samples: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, admissible: impl Into<String>) -> Error {
    Error::Domain {
        what,
        value,
        admissible: admissible.into(),
    }
}
