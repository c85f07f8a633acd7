use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}; expected one of 2, 3, 4, 5, 7, 8, 9")]
    UnsupportedOrder(u32),

    #[error("symbol {symbol} is not an element of GF({q})")]
    SymbolOutOfRange { symbol: u32, q: u8 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("field mismatch: expected GF({expected}), got GF({actual})")]
    FieldMismatch { expected: u8, actual: u8 },

    #[error("budget exceeded: {what} needs 2^{needed_log2:.1}, budget is 2^{budget_log2:.1}")]
    BudgetExceeded {
        what: String,
        needed_log2: f64,
        budget_log2: f64,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input code is not 1-perfect: {0}")]
    NotPerfectInput(String),

    #[error("key code is not even-like: {0}")]
    NonEvenLikeR(String),

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("word file error: {0}")]
    WordFile(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed_log2: f64, budget_log2: f64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed_log2,
            budget_log2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Manifest(e.to_string())
    }
}
