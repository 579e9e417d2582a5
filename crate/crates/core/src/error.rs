use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph is not a forest; exact volumes are only available for forests")]
    NotForest,
    #[error("profile is not strict: slope {0} on the support is not in (-1, 1)")]
    NonStrictProfile(String),
    #[error("content {z} lies outside the support [{lo}, {hi}]")]
    OutsideSupport { z: String, lo: String, hi: String },
    #[error("rank-deficient training set: rank {rank} < {unknowns}; unresolved monomials {unresolved:?}")]
    RankDeficient {
        rank: usize,
        unknowns: usize,
        unresolved: Vec<Vec<u32>>,
    },
    #[error("size mismatch: |lambda| = {lambda}, |pi| = {pi}")]
    SizeMismatch { lambda: usize, pi: usize },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("sign calibration failed: {0}")]
    Calibration(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
