use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {position} near {token:?}: {message}")]
    Parse {
        token: String,
        position: usize,
        message: String,
    },
    #[error("quadratic chain leaves the rationals: discriminant {discriminant} is not a rational square")]
    NotRationalChain { discriminant: String },
    #[error("degree budget exceeded: reached degree {degree} with budget {budget}")]
    DegreeBudgetExceeded { degree: usize, budget: usize },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
