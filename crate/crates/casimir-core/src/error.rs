use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error("result overflows f64: {0}")]
    Overflow(&'static str),
    #[error("evaluation at a pole: {0}")]
    Pole(&'static str),
    #[error("divergent quantity: {0}")]
    Divergent(&'static str),
    #[error("no convergence within the allowed budget: {0}")]
    NoConvergence(&'static str),
    #[error("operator is not diagonalizable: {0}")]
    NotDiagonalizable(&'static str),
    #[error("integration unstable: {0}")]
    Unstable(&'static str),
    #[error("spectrum truncation insufficient: last contribution {last:e} vs total {total:e}")]
    Truncation { last: f64, total: f64 },
    #[error("unsupported request: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
