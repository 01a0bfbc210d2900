use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("velocity above threshold: c^2 = {c2} >= 2*lambda = {threshold}")]
    VelocityAboveThreshold { c2: f64, threshold: f64 },

    #[error("no interior root: {0}")]
    NoInteriorRoot(String),

    #[error("wrong branch: {0}")]
    WrongBranch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("boundary condition {0:?} is not supported here")]
    UnsupportedBoundary(crate::grid::Boundary),

    #[error("trivial modulus: |u| - 1 vanishes identically")]
    TrivialModulus,

    #[error("basis truncation: {0}")]
    BasisTruncation(String),

    #[error("gluing error: modulus deviates from 1 by {deviation:e} at the box edge")]
    Gluing { deviation: f64 },

    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("no samples")]
    NoSamples,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
