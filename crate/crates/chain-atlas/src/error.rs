use thiserror::Error;

/// Errors produced by chain-atlas operations.
#[derive(Debug, Error)]
pub enum ChainError {
    #[error("an instance needs at least 3 dimensions (chain length >= 2), got {0}")]
    InstanceTooShort(usize),

    #[error("dimension k_{0} must be at least 1")]
    ZeroDimension(usize),

    #[error("chain length must be at least 2, got {0}")]
    ChainTooShort(usize),

    #[error("index {index} out of range for a dimension tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("ordering spans {ordering} matrices but the instance has {instance}")]
    LengthMismatch { ordering: usize, instance: usize },

    #[error("chain length {n} exceeds the enumeration limit {limit}")]
    EnumerationLimitExceeded { n: usize, limit: usize },

    #[error("fan-out index {h} out of range 0..={n}")]
    FanOutIndexOutOfRange { h: usize, n: usize },

    #[error("the growth sequence is defined for chain length >= 3, got {0}")]
    GrowthSequenceTooShort(usize),

    #[error("invalid triplet set: {0}")]
    InvalidTripletSet(String),

    #[error("removing every ordering leaves nothing to evaluate")]
    EmptyRestriction,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ChainError>;
