//! Error type shared by all solvers and checks.

use std::fmt;

/// Everything that can go wrong in a solve or a check.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation point lies outside the domain of a sampled weight.
    DomainError { x: f64, lo: f64, hi: f64 },
    /// Operation not defined for this weight kind.
    UnsupportedKind(&'static str),
    /// Input violates a precondition (p <= 1, nonpositive length, weight, or ratio).
    DegenerateInput(String),
    /// ODE state stopped being finite.
    NonFinite { x: f64 },
    /// Integration step too coarse for the oscillation scale of a weight.
    StepTooLarge { h: f64, limit: f64 },
    /// Iteration budget exhausted without meeting the tolerance.
    NonConvergence(String),
    /// Root bracket invalid or the zero count failed to be monotone across it.
    BracketFailure(String),
    /// Quadrature refinement would exceed the panel budget.
    QuadratureBudgetExceeded { requested: usize, budget: usize },
    /// Too few usable data points for a fit.
    InsufficientData { got: usize, need: usize },
    /// A path lost its waypoint continuity budget or an endpoint sign cone.
    PathBroken(String),
    /// Configuration failed validation.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DomainError { x, lo, hi } => {
                write!(f, "point {x} outside weight domain [{lo}, {hi}]")
            }
            Error::UnsupportedKind(what) => write!(f, "operation unsupported for {what} weights"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::NonFinite { x } => write!(f, "state became non-finite near x = {x}"),
            Error::StepTooLarge { h, limit } => {
                write!(f, "step h = {h} exceeds oscillation limit {limit}")
            }
            Error::NonConvergence(msg) => write!(f, "failed to converge: {msg}"),
            Error::BracketFailure(msg) => write!(f, "bracket failure: {msg}"),
            Error::QuadratureBudgetExceeded { requested, budget } => {
                write!(f, "quadrature needs {requested} panels, budget is {budget}")
            }
            Error::InsufficientData { got, need } => {
                write!(f, "need at least {need} data points, got {got}")
            }
            Error::PathBroken(msg) => write!(f, "path broken: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
