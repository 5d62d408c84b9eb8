use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("alignment error: {0}")]
    Alignment(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("kernel not integrable: {0}")]
    KernelIntegrability(String),
    #[error("unbounded kernel: {0}")]
    UnboundedKernel(String),
    #[error("composition undefined: {0}")]
    CompositionUndefined(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("specification violation: {0}")]
    SpecViolation(String),
    #[error("matrix not positive semidefinite: smallest eigenvalue {0:e}")]
    NumericalPsd(f64),
    #[error("truncation too large: Gram condition number {0:e}")]
    TruncationTooLarge(f64),
    #[error("path {path} diverged at step {step}: norm {norm:e} exceeds cap {cap:e}")]
    Divergence {
        path: u64,
        step: usize,
        norm: f64,
        cap: f64,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
