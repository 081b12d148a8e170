use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the function is defined.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The result is not representable as a finite `f64`.
    #[error("range error in {func}: {detail}")]
    Range { func: &'static str, detail: String },

    /// An iterative procedure exhausted its budget before meeting the tolerance.
    #[error("{func} did not converge: estimated error {est_error:e} after {evaluations} evaluations")]
    NoConvergence {
        func: &'static str,
        est_error: f64,
        evaluations: usize,
    },

    /// A caller violated the contract of an operation (e.g. asked for a derivative order
    /// the integrand cannot provide).
    #[error("contract violation in {func}: {detail}")]
    Contract { func: &'static str, detail: String },

    /// Invalid user-supplied configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn range(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Range {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn contract(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Contract {
            func,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
