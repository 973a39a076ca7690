use thiserror::Error;

/// Errors raised by the operator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),

    #[error("index {what} = {value} out of range 0..={max}")]
    IndexOutOfRange {
        what: &'static str,
        value: i64,
        max: i64,
    },

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error(
        "quadrature did not converge within {panels} panels \
         (estimate {estimate:e}, error estimate {error_estimate:e})"
    )]
    QuadratureNotConverged {
        estimate: f64,
        error_estimate: f64,
        panels: usize,
    },

    #[error("function `{function}` has no analytic {which}")]
    MissingDerivative {
        function: String,
        which: &'static str,
    },

    #[error("analytic {which} of `{function}` disagrees with finite differences at x = {x}")]
    DerivativeMismatch {
        function: String,
        which: &'static str,
        x: f64,
    },

    #[error("non-finite value {value} for {what}")]
    NonFinite { what: &'static str, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_unit_interval(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[0, 1]",
        })
    }
}
