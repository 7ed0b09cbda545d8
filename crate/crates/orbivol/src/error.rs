use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations")]
    Convergence {
        iterations: usize,
        best: Vec<Complex64>,
    },

    #[error("degenerate solution: {0}")]
    Degenerate(String),

    #[error("inconsistent solution: {0}")]
    Inconsistent(String),

    #[error("non-hyperbolic parameters: {0}")]
    NonHyperbolic(String),

    #[error("no geometric solution among {candidates} candidates")]
    NoGeometricSolution { candidates: usize },

    #[error("cannot read input: {0}")]
    Io(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("diagram is not alternating: {0}")]
    NonAlternating(String),

    #[error("continuation lost convergence at t = {last_t:.6}")]
    Continuation { last_t: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
