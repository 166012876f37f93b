use thiserror::Error;

use crate::solver::SolveResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid phase point: {0}")]
    InvalidPoint(String),

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },

    #[error("group mismatch: {left:?} vs {right:?}")]
    GroupMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("length mismatch for {what}: expected {expected}, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },

    #[error("invalid parameter {name} = {value}: must be {constraint}")]
    InvalidParameter { name: &'static str, value: f64, constraint: &'static str },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("{what} needs {cost} evaluations at N = {dim}; refusing above N = {limit} unless forced")]
    TooLarge { what: &'static str, dim: usize, limit: usize, cost: u64 },

    #[error("transformer symbol vanishes at dual index {0}; not invertible")]
    SingularSymbol(usize),

    #[error("potential not in open unit ball: ||V||_B0 = {0}")]
    NotAContraction(f64),

    #[error("max iterations exceeded: a-posteriori bound {:e} after {} iterations", .0.aposteriori_bound, .0.iterations)]
    MaxIterationsExceeded(Box<SolveResult>),

    #[error("singular or ill-conditioned system (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("random draw is zero and cannot be rescaled after {attempts} attempts")]
    ZeroDraw { attempts: u32 },

    #[error("invalid file: field `{field}`: {message}")]
    Format { field: &'static str, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::InvalidParameter { name, value, constraint }
    }
}
