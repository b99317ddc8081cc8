use std::io;
use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid range [{lo}, {hi}): require 2 <= lo < hi")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("range [{lo}, {hi}) holds {odds} odd entries, exceeding the segment budget of {budget}")]
    RangeTooLarge {
        lo: u64,
        hi: u64,
        odds: u64,
        budget: u64,
    },

    #[error("limit {n} exceeds the supported maximum {max}")]
    LimitTooLarge { n: u64, max: u64 },

    #[error("cache file {path}: {reason}")]
    CacheFormat { path: PathBuf, reason: String },

    #[error("cache file {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("unknown function id `{0}`")]
    UnknownFunction(String),

    #[error("invalid parameters for `{id}`: {reason}")]
    InvalidParams { id: String, reason: String },

    #[error("function `{id}` grows exponentially but provides no log-space evaluator")]
    MissingLogEval { id: String },

    #[error("relative tolerance {0:e} outside [1e-12, 1e-2]")]
    InvalidTolerance(f64),

    #[error("invalid integration bounds [{a}, {b}]: require 2 <= a <= b")]
    InvalidBounds { a: f64, b: f64 },

    #[error("integrand is not finite at t = {t}")]
    NonFiniteIntegrand { t: f64 },

    #[error("adaptive quadrature exceeded {limit} intervals")]
    MaxSubdivisions { limit: usize },

    #[error("function `{id}` violates a model hypothesis: {requirement}")]
    HypothesisViolation { id: String, requirement: String },

    #[error("summation overflowed at t = {t} (growth class misdeclared?)")]
    Overflow { t: f64 },

    #[error("invalid model constants: {0}")]
    InvalidModel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
