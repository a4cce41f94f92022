use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported by this weight: {0}")]
    Capability(String),
    #[error("quadrature did not reach tolerance: error {achieved:e}, wanted {wanted:e}")]
    Precision { achieved: f64, wanted: f64 },
    #[error("inconsistent second derivative formulas: {a:e} vs {b:e}")]
    Consistency { a: f64, b: f64 },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("condition {0} fails")]
    Condition(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("bad data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
