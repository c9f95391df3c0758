use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration (grid, quadrature, sample count) cannot deliver the
    /// requested accuracy or violates a structural requirement.
    #[error("configuration error: {0}")]
    Config(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error_estimate:e} \
         after {subdivisions} subdivisions ({context})"
    )]
    Convergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
        context: String,
    },

    /// An internal identity failed to hold within its tolerance.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// The wave packet reached the edge of the periodic position box.
    #[error("wrap-around: {0}")]
    WrapAround(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
