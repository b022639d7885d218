use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid word character {0:?}; expected '0' or '1'")]
    InvalidSymbol(char),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("target radius 2^-{target_bits} not reached at the {max_bits}-bit precision cap")]
    PrecisionExhausted { target_bits: u32, max_bits: u32 },

    #[error("comparison indeterminate at the {max_bits}-bit precision cap: {what}")]
    Indeterminate { what: String, max_bits: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by running out of working precision rather
    /// than by bad input.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::Indeterminate { .. }
        )
    }
}
