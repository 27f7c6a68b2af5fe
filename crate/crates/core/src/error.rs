use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {constraint}")]
    Domain { op: &'static str, constraint: String },

    /// The radial moment for this exponent diverges.
    #[error("infinite moment at t = {t}")]
    InfiniteMoment { t: f64 },

    /// A Laurent degree is not square integrable against the weight.
    #[error("degree {degree} is not admissible in this space")]
    Inadmissible { degree: i32 },

    /// Angular sampling cannot resolve the requested degrees.
    #[error("aliasing: {angles} angles cannot resolve degrees up to |n| = {max_degree}")]
    Aliasing { angles: usize, max_degree: i32 },

    /// The quadrature did not reach its tolerance within the node budget.
    #[error("quadrature did not converge: {context}")]
    NotConverged { context: String },

    /// Malformed serialized input.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, constraint: impl Into<String>) -> Self {
        Error::Domain {
            op,
            constraint: constraint.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
