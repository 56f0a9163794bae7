use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A moment required by the operation does not exist for the model.
    #[error("{model} has no finite {moment}")]
    Moment { model: String, moment: &'static str },

    /// An iterative solver failed to converge.
    #[error("{routine} did not converge after {iterations} iterations (bracket [{lo}, {hi}], residual {residual:e})")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    /// A density vanishes where an asymptotic variance divides by it.
    #[error("singular asymptotic variance: {0}")]
    Singularity(String),

    /// A distribution spec or config could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// An experiment configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn moment(model: impl std::fmt::Display, moment: &'static str) -> Self {
        Error::Moment {
            model: model.to_string(),
            moment,
        }
    }

    /// True for errors caused by the caller's input rather than a numerical failure.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. })
    }
}
