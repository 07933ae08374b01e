//! Error type shared by all engine modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("evaluation point {re}{im:+}i is within tolerance of a pole")]
    Pole { re: f64, im: f64 },

    #[error("input is outside the requested cone: {0}")]
    OutsideCone(String),

    #[error("Riccati equation has no suitable solution: {0}")]
    AreNoSolution(String),

    #[error("Riccati spectrum too close to the imaginary axis for a stable split: {0}")]
    AreIllSeparated(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
