//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The integer supplied as a prime is not prime.
    #[error("{0} is not a prime")]
    NotPrime(u64),
    /// Valuation requested on a field where it is not canonical.
    #[error("p-adic valuation is not defined on Q(zeta_{conductor}) for p = {p}")]
    UnsupportedField { conductor: u64, p: u64 },
    /// Inversion of zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Operands have different variable counts or windows.
    #[error("incompatible shapes: {0}")]
    IncompatibleShapes(String),
    /// Shift by an element outside the open disk of convergence.
    #[error("shift point outside the disk ord_p > r")]
    ShiftOutOfDisk,
    /// Evaluation point outside the open disk of convergence.
    #[error("evaluation point outside the disk ord_p > r")]
    EvalOutOfDisk,
    /// Operation needs a nonzero series.
    #[error("series is zero")]
    ZeroSeries,
    /// Valuation could not be certified from the stored truncation.
    #[error("valuation is not certified by the truncation")]
    InexactValuation,
    /// Division by the zero series.
    #[error("division by zero series")]
    ZeroDivisor,
    /// Truncation too short to certify a division result.
    #[error("truncation too short to certify the division: {0}")]
    NonconvergentPrecision(String),
    /// Newton data requested on an uncertified interval.
    #[error("truncation does not certify the requested interval: {0}")]
    InsufficientTruncation(String),
    /// Interval arithmetic could not decide a floor.
    #[error("interval evaluation undecided after precision escalation")]
    IntervalUndecided,
    /// Window narrower than the growth requires.
    #[error("window width {width} is below floor(h) = {needed}")]
    WindowTooNarrow { width: i64, needed: i64 },
    /// Not enough stored levels.
    #[error("insufficient levels: {0}")]
    InsufficientLevels(String),
    /// Lifting hypothesis violated at a level and exponent.
    #[error("theta hypothesis fails at level {level:?}, exponent {j:?}")]
    HypothesisFailed { level: Vec<u32>, j: Vec<i64> },
    /// Moment tables at different levels.
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    /// Special value at the pole.
    #[error("special value requested at the pole")]
    PoleCase,
    /// Character parity incompatible with the requested value.
    #[error("character parity does not match")]
    ParityMismatch,
    /// Malformed input data.
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Result alias.
pub type Result<T> = std::result::Result<T, Error>;
