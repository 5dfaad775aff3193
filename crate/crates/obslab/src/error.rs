//! Crate-wide error type for the numerics and simulation layers.

use std::fmt;

/// Errors surfaced by the numerics, estimator, and simulation layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(String),
    /// A dense linear system was singular (or the operator was not Hurwitz
    /// where the equation requires it).
    SingularSystem(String),
    /// An iterative solver hit its iteration cap without converging.
    IterationLimit(String),
    /// An input drove a computation into a numerically meaningless regime.
    DegenerateInput(String),
    /// The integrator produced a non-finite state.
    IntegrationDiverged { t: f64 },
    /// A simulation would exceed the configured step budget.
    BudgetExceeded { steps: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SingularSystem(msg) => write!(f, "singular system: {msg}"),
            Error::IterationLimit(msg) => write!(f, "iteration limit: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::IntegrationDiverged { t } => {
                write!(f, "integration diverged at t = {t:.6e} s")
            }
            Error::BudgetExceeded { steps } => {
                write!(f, "step budget exceeded: {steps:.3e} raw steps requested")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
