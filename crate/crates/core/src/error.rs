use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("vector norm {norm} violates the bound ({expected})")]
    NormViolation { norm: f64, expected: &'static str },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unknown {side} input {index} (protocol declares {len})")]
    UnknownInput {
        side: &'static str,
        index: usize,
        len: usize,
    },

    #[error(
        "postprocessing infeasible for Bob input {input}, message {message:+}: |c| + |c'| = {weight}"
    )]
    InfeasiblePostprocessing {
        input: usize,
        message: i8,
        weight: f64,
    },

    #[error("unsupported protocol form: {0}")]
    UnsupportedForm(String),

    #[error("query matrix invalid: {0}")]
    InvalidQueryMatrix(String),

    #[error("ensemble bits are not pairwise independent: {0}")]
    NotPairwiseIndependent(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
