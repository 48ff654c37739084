use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside its admissible range.
    Domain(String),
    /// An iterative routine stopped without reaching its tolerance.
    /// Carries the final residual so callers can judge severity.
    NoConvergence { what: String, residual: f64 },
    /// A least-squares or interpolation system was too ill-conditioned
    /// to trust; carries the achieved residual.
    IllConditioned { what: String, residual: f64 },
    /// Evaluation requested exactly at a curve branchpoint.
    SingularPoint(f64),
    /// The LP inside differential correction was infeasible or unbounded.
    Infeasible(String),
    /// No solution family converged in `design`; carries per-family
    /// residual diagnostics.
    NoSolutionFound(Vec<(String, f64)>),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NoConvergence { what, residual } => {
                write!(f, "{what} did not converge (residual {residual:.3e})")
            }
            Error::IllConditioned { what, residual } => {
                write!(f, "{what} ill-conditioned (residual {residual:.3e})")
            }
            Error::SingularPoint(x) => write!(f, "evaluation at branchpoint x = {x}"),
            Error::Infeasible(msg) => write!(f, "linear program failed: {msg}"),
            Error::NoSolutionFound(diag) => {
                write!(f, "no solution family converged:")?;
                for (name, r) in diag {
                    write!(f, " {name} (residual {r:.3e})")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
