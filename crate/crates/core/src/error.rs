use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("newton iteration did not reach tolerance in {iterations} steps (|p(z)| = {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("derivative vanished at z = {re} + {im}i")]
    DerivativeVanished { re: f64, im: f64 },
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("λ^p is numerically 1 (|1 - λ^p| = {0:e})")]
    PoleAtUnity(f64),
    #[error("series has a zero coefficient in its periodic block")]
    ZerosInPeriod,
    #[error("level {level} exceeds the limit {limit} for this alphabet")]
    LevelTooDeep { level: usize, limit: usize },
    #[error("word length {0} exceeds the packed capacity of 32 letters")]
    WordTooLong(usize),
    #[error("parameter must satisfy 0 < |λ| < 1 (got |λ| = {0})")]
    InvalidLambda(f64),
    #[error("λ is not a root of the series (|f(λ)| = {0:e})")]
    NotARoot(f64),
    #[error("polynomial enumeration for n = {0} is too large (limit n <= 12)")]
    EnumerationTooLarge(usize),
    #[error("bad chain indices: {0}")]
    BadIndices(String),
    #[error("unknown landmark id {0} (expected 1..=6)")]
    UnknownLandmark(u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("itinerary inconsistent with the series: {0}")]
    InconsistentWord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
