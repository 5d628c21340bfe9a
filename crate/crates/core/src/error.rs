use thiserror::Error;

use crate::exact_arith::Rational;

/// Errors raised by the exact arithmetic, series and formula layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("leading coefficient is zero or unknown; series is not a unit")]
    NonUnitLeadingCoefficient,

    #[error("coefficient of q^{requested} requested but series is only known below q^{precision}")]
    InsufficientPrecision { requested: i64, precision: i64 },

    #[error("eta quotient has leading power q^({0}), which is not an integer power of q")]
    FractionalLeadingPower(Rational),

    #[error("cusp denominator {denominator} does not divide level {level}")]
    CuspNotOnLevel { denominator: u64, level: u64 },

    #[error("invalid eta quotient: {0}")]
    InvalidQuotient(String),

    #[error("invalid cusp: {0}")]
    InvalidCusp(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("search space of {size} points exceeds the limit of {limit}")]
    ResourceLimit { size: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
