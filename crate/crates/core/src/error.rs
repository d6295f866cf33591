use crate::clifford::Signature;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature ({r},{s}): {reason}")]
    InvalidSignature { r: usize, s: usize, reason: String },

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("operation requires signature (1,n-1), got {0}")]
    NotLorentzian(Signature),

    #[error("index out of range: {what} = {value} (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid tetrad: {0}")]
    InvalidTetrad(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parity restriction violated: {0}")]
    Parity(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("not a Hermitian idempotent: {0}")]
    NotIdempotent(String),

    #[error("membership violated: {0}")]
    Membership(String),

    #[error("Friedrichs conditions not satisfied: {0}")]
    NotHyperbolic(String),

    #[error("CFL condition violated: dt = {dt:e} > {limit:e}")]
    Cfl { dt: f64, limit: f64 },

    #[error("non-finite value at step {step}, point {point}, component {component}")]
    NonFinite {
        step: usize,
        point: usize,
        component: usize,
    },

    #[error("invalid model: {0}")]
    Model(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
