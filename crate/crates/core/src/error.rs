use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field order {0} is not supported (expected one of 2,3,4,5,7,8,9)")]
    UnsupportedField(u8),

    #[error("ambient dimension {0} out of range 1..=16")]
    DimensionOutOfRange(usize),

    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("entry {value} at row {row} is not an element of GF({q})")]
    EntryOutOfRange { row: usize, value: u64, q: u8 },

    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,

    #[error("{what} would visit {needed} items, over the budget of {cap}")]
    BudgetExceeded {
        what: String,
        needed: String,
        cap: u64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid anchors: {0}")]
    InvalidAnchors(String),

    #[error("family format: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
