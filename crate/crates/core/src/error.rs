use thiserror::Error;

/// Errors raised when an operation's preconditions are not met.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value at index {0}")]
    NonFinite(i64),
    #[error("exponent {0} outside (1, ∞)")]
    ExponentOutOfRange(f64),
    #[error("Hölder exponents do not satisfy the scaling identity (residual {0:e})")]
    ScalingIdentity(f64),
    #[error("expected {expected} functions, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid truncation: need 1 <= r <= R, got r = {r}, R = {big_r}")]
    Truncation { r: f64, big_r: f64 },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("modulus {0} must be a prime larger than k = {1}")]
    NotPrimeModulus(usize, usize),
    #[error("|f| = {0} exceeds 1")]
    NotBounded(f64),
    #[error("support [{lo}, {hi}] not contained in [1, {n}]")]
    SupportOutsideInterval { lo: i64, hi: i64, n: usize },
    #[error("embedding modulus {modulus} smaller than 2^d N = {min}")]
    EmbeddingTooSmall { modulus: usize, min: usize },
    #[error("negative Gowers power {0:e} below roundoff tolerance")]
    NegativeGowersPower(f64),
    #[error("growth function violates F(M) >= max(M, 1) at M = {0}")]
    Growth(usize),
    #[error("t = 0 is not in the kernel support")]
    ZeroShift,
    #[error("{0}")]
    InvalidArgument(String),
    #[error("certification failed: {check} residual {residual:e} exceeds {tolerance:e}")]
    Certification {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("{0} did not converge")]
    NotConverged(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
