use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence order k must be at least 2, got {0}")]
    InvalidOrder(i64),

    #[error("n = {n} is below the order k = {k}; the closed forms need n >= k")]
    BelowOrder { n: i64, k: u32 },

    #[error("n = {n} is excluded for k = {k}: the ordinary-binomial formula requires n != 2k - 1")]
    ExcludedIndex { n: i64, k: u32 },

    #[error("n must be at least {min}, got {n}")]
    IndexTooSmall { n: i64, min: i64 },

    #[error("the asymptotic series is not defined at n = 1")]
    SeriesExcludedIndex,

    #[error("precision of {0} bits requested; at least 8 bits are required")]
    PrecisionTooLow(u32),

    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("oracle cap: enumerating compositions of n = {n} exceeds the cap {cap}; use a recurrence engine")]
    OracleCap { n: u64, cap: u64 },

    #[error("division by an interval that contains zero")]
    DivisionByZero,

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors caused by arguments outside an operation's domain.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Inconsistency(_))
    }
}
