use std::fmt;

/// Errors raised anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A special-function order or index is outside the supported window.
    #[error("range error: {0}")]
    Range(String),

    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters violate a documented bound.
    #[error("validation error: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// The geometry cannot be discretized (e.g. R1 collapses onto a boundary).
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Root bracketing, factorization, or self-adjointness check failed.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Iteration budget exhausted before every requested pair met the tolerance.
    #[error("solver did not converge after {restarts} restarts (best residuals {})", ResidualList(.best_residuals))]
    NoConvergence {
        restarts: usize,
        best_residuals: Vec<f64>,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// All grid values fall below the nodal threshold.
    #[error("degenerate vector: {0}")]
    DegenerateVector(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

struct ResidualList<'a>(&'a [f64]);

impl fmt::Display for ResidualList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:.3e}")?;
        }
        write!(f, "]")
    }
}

impl Error {
    /// Process exit status: 1 for bad input, 2 for solver failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) | Error::NoConvergence { .. } | Error::DegenerateVector(_) => 2,
            Error::Io(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(vec![msg.into()])
    }
}
