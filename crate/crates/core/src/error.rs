use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("operator is not Hermitian (max |A - A†| = {0:e})")]
    NotHermitian(f64),

    #[error("operator is not traceless (|Tr| = {0:e})")]
    NotTraceless(f64),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("map is not completely positive (min Choi eigenvalue {0:e})")]
    NotCP(f64),

    #[error("superoperator is not trace-destroying (defect {0:e})")]
    NotTraceDestroying(f64),

    #[error("dynamical map is singular at t = {t} (condition number {condition_number:e})")]
    SingularMap { t: f64, condition_number: f64 },

    #[error("closed-form rates are singular at t = {0}")]
    SingularTime(f64),

    #[error("canonical form does not reconstruct its generator (residual {0:e})")]
    ReconstructionFailure(f64),

    #[error("generator constructions disagree at t = {t} (residual {residual:e})")]
    GeneratorMismatch { t: f64, residual: f64 },

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
