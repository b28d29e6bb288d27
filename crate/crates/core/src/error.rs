use thiserror::Error;

/// Errors raised by the toolkit. Mathematical verdicts (an inequality that
/// fails, an infeasible relation) are values, not errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("total masses differ: {left} vs {right}")]
    MassMismatch { left: f64, right: f64 },

    #[error("point {point:?} lies outside the domain of {function}")]
    OutsideDomain { function: String, point: Vec<f64> },

    #[error("not majorized: {0}")]
    NotMajorized(String),

    #[error("measures not in majorization relation (phase-1 objective {objective:e})")]
    NotInRelation { objective: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("{function} has no derivative evaluator")]
    MissingDerivative { function: String },

    #[error(
        "derivative of {function} disagrees with finite differences at t = {at}: {derivative} vs {finite_difference}"
    )]
    DerivativeMismatch {
        function: String,
        at: f64,
        derivative: f64,
        finite_difference: f64,
    },

    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },
}

impl Error {
    /// True for failures of a numerical procedure rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
