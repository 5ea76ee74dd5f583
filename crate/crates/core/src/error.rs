use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("undefined for this input: {0}")]
    UndefinedInput(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("order {order} is not admissible (need n mod 6 in {{1, 3}}); nearest admissible order is {suggestion}")]
    Inadmissible { order: usize, suggestion: usize },

    #[error("no base system of order {0} (supported: 3, 7, 9, 13, 15)")]
    UnsupportedBase(usize),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("pattern counts sum to {got}, expected {expected}")]
    CountsMismatch { got: u64, expected: u64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("nodes {nodes:?} have zero degree under {normalization} normalization")]
    Normalization { normalization: &'static str, nodes: Vec<usize> },

    #[error("numerical instability at theta = {theta}, b = {coupling}")]
    Instability { theta: f64, coupling: f64 },

    #[error("infeasible target profile: {0}")]
    Infeasible(String),

    #[error("unknown token {token:?} on line {line}")]
    UnknownToken { token: String, line: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
