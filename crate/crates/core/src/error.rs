use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration budget exceeded: {needed} products requested, budget {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("eigenvalue computation failed (residual {residual:.3e}): {note}")]
    Eigen { residual: f64, note: String },
    #[error("unstable rank decision: {0}; supply exact eigenvalue hints")]
    UnstableRank(String),
    #[error("singular basis matrix")]
    Singular,
    #[error("no continuous solution guaranteed: rho = {rho} <= lambda* = {lambda}. {note}")]
    NoSolutionGuarantee { rho: f64, lambda: f64, note: String },
    #[error("not recognized at level {level} (dimension still growing, {dim} so far)")]
    NotRecognized { level: u32, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
