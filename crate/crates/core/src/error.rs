use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("insufficient truncation: need {what} >= {required}, have {have}")]
    Truncation {
        what: &'static str,
        required: usize,
        have: usize,
    },
    #[error("test vector leaves the safe window: {0}")]
    Window(String),
    #[error("quadrature did not converge on [{lo}, {hi}] (estimated error {err:e})")]
    Quadrature { lo: f64, hi: f64, err: f64 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
