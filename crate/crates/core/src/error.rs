use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inadmissible form parameters (epsilon = {epsilon}, d = {d})")]
    InadmissibleForm { epsilon: i8, d: u8 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rank {r} too small: this operation needs r >= {min}")]
    RankTooSmall { r: usize, min: usize },

    /// A tuple failed a genericity predicate; `condition` names it.
    #[error("not generic: {condition}")]
    NotGeneric { condition: String },

    /// Parameters outside the domain `Ω₃`, `Ω₄` or `Ω₄′`.
    #[error("parameters outside {domain}: {reason}")]
    OutsideDomain { domain: &'static str, reason: String },

    #[error("ill-conditioned {what} (condition estimate {condition:.3e})")]
    IllConditioned { what: &'static str, condition: f64 },

    #[error("partial basis violates the adapted Gram relations (residual {residual:.3e})")]
    InvalidPartialBasis { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A failure inside trial `index` of a seeded batch.
    #[error("trial {index}: {source}")]
    Trial { index: u64, source: Box<Error> },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn not_generic(condition: impl Into<String>) -> Self {
        Error::NotGeneric {
            condition: condition.into(),
        }
    }
}
