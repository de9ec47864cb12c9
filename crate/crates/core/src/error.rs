//! Error types shared by the sampling operations.

use thiserror::Error;

/// Errors raised by sampler construction, updates, merges and combines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    /// Sample capacity K must be at least 1.
    #[error("sample capacity must be at least 1")]
    InvalidCapacity,

    /// Weight must be a positive finite real.
    #[error("weight must be positive and finite (got {0})")]
    InvalidWeight(f64),

    /// A weight was supplied to an unweighted method.
    #[error("method {0} is unweighted; call fit without a weight")]
    UnexpectedWeight(&'static str),

    /// A weighted method was updated without a weight.
    #[error("method {0} is weighted; call fit_weighted")]
    MissingWeight(&'static str),

    /// Merge inputs disagree on method or capacity.
    #[error("cannot merge samplers: {0}")]
    IncompatibleMerge(String),

    /// Sequential sampling without replacement needs K <= N.
    #[error("requested {k} of {n} items without replacement")]
    SampleLargerThanPopulation { k: u64, n: u64 },

    /// Declared population or total weight must be positive.
    #[error("declared stream total must be positive")]
    InvalidTotal,

    /// Weighted sequential sampling without replacement cannot be realized
    /// from the total weight alone: selecting an item changes every later
    /// item's inclusion probability, which depends on the individual
    /// unseen weights, not just their sum.
    #[error(
        "weighted sequential sampling without replacement is impossible \
         knowing only the total weight; use a weighted reservoir method"
    )]
    WeightedSequentialWithoutReplacement,

    /// Stream ended before the declared element count was consumed.
    #[error("stream exhausted with {missing} of {declared} declared elements never seen")]
    TruncatedCount { declared: u64, missing: u64 },

    /// Stream ended before the declared total weight was consumed.
    #[error("stream exhausted with weight {missing} of declared total {declared} never seen")]
    TruncatedWeight { declared: f64, missing: f64 },

    /// Combine inputs are inconsistent.
    #[error("cannot combine partition samples: {0}")]
    IncompatibleCombine(String),

    /// Exact-law enumeration is capped at small instances.
    #[error("exact law enumeration supports at most {max} items (got {got})")]
    OracleTooLarge { max: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, SampleError>;
