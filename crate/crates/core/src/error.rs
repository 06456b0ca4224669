use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("rank range [{start}, {end}) out of bounds for S_{p} (order {order})")]
    RankOutOfBounds { p: usize, start: u64, end: u64, order: u64 },

    #[error("permutation {0} is not on the geodesic from the identity to the full cycle")]
    NotOnGeodesic(String),

    #[error("invalid set partition: {0}")]
    InvalidPartition(String),

    #[error("{what} = {requested} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { what: &'static str, requested: usize, ceiling: usize },

    #[error("dimension must be positive: {0}")]
    ZeroDimension(&'static str),

    #[error("need cumulants up to order {needed}, only {available} given")]
    InsufficientCumulants { needed: usize, available: usize },

    #[error("operation not supported for distribution {0}")]
    UnsupportedDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed pair partition: {0}")]
    MalformedPairPartition(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),

    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("class table cache: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
