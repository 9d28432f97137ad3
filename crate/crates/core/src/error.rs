use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed interval: {0}")]
    MalformedInterval(String),
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("zeta has a pole at 1")]
    PoleAtOne,
    #[error("delta out of range: {0}")]
    DeltaOutOfRange(String),
    #[error("comparison cannot be certified: {0}")]
    AmbiguousComparison(String),
    #[error("majorant violated at p = {prime} for {what}")]
    MajorantViolation { what: String, prime: u64 },
    #[error("tail bound diverges: {0}")]
    TailDiverges(String),
    #[error("non-positive Euler factor at p = {prime} for {what}")]
    NonPositiveFactor { what: String, prime: u64 },
    #[error("outside analytic domain: {0}")]
    OutsideAnalyticDomain(String),
    #[error("degenerate function: {0}")]
    DegenerateFunction(String),
    #[error("alpha out of range: {0}")]
    AlphaOutOfRange(String),
    #[error("beta - alpha must exceed 1/2 for the critical exponent method")]
    BetaGapTooSmall,
    #[error("unsupported modulus: {0}")]
    UnsupportedModulus(String),
    #[error("supremum candidates cannot be separated: {0}")]
    MaxAmbiguous(String),
    #[error("unknown constant: {0}")]
    UnknownConstant(String),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
}
