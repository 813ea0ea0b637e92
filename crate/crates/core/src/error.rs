use thiserror::Error;

use crate::geom::Config;
use crate::regions::ClassLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("joint mismatch: first curve ends at {end:?}, second starts at {start:?}")]
    Joint { end: Config, start: Config },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no CSC word joins {start:?} to {end:?}")]
    Infeasible { start: Config, end: Config },

    #[error("move infeasible: {0}")]
    MoveInfeasible(String),

    #[error("reduction did not converge: {0}")]
    NonConvergence(String),

    #[error("curves lie in different homotopy classes ({a:?} vs {b:?})")]
    ClassMismatch { a: ClassLabel, b: ClassLabel },

    #[error("curve is not kappa-constrained: {0}")]
    Validation(String),

    #[error("curve generation failed: {0}")]
    Generation(String),
}
