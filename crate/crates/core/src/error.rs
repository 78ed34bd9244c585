use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("path loss is singular at the origin")]
    SingularAtOrigin,

    #[error("{0} fading has no closed-form Laplace transform")]
    UnsupportedFading(&'static str),

    #[error("fractional moment E[h^{order}] diverges for {model} fading")]
    DivergentMoment { order: f64, model: &'static str },

    #[error("mean interference diverges: {0}")]
    DivergentMean(&'static str),

    #[error(
        "quadrature in `{operation}` did not converge after {subdivisions} subdivisions \
         (last estimates {last:e} and {previous:e}, error estimate {error:e})"
    )]
    NonConvergence {
        operation: &'static str,
        subdivisions: usize,
        last: f64,
        previous: f64,
        error: f64,
    },

    #[error("integrand in `{operation}` is not finite at {at}")]
    NonFiniteIntegrand { operation: &'static str, at: f64 },

    #[error("derivative of order {order} is numerically unstable ({first:e} vs {second:e})")]
    DerivativeInstability {
        order: usize,
        first: f64,
        second: f64,
    },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Replaces the operation name of a quadrature failure so the report names
    /// the caller instead of the generic integrator.
    pub fn in_operation(self, op: &'static str) -> Self {
        match self {
            Error::NonConvergence {
                subdivisions,
                last,
                previous,
                error,
                ..
            } => Error::NonConvergence {
                operation: op,
                subdivisions,
                last,
                previous,
                error,
            },
            Error::NonFiniteIntegrand { at, .. } => Error::NonFiniteIntegrand { operation: op, at },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
