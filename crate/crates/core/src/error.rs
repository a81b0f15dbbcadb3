use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("precision exhausted at {bits} bits while {what}")]
    PrecisionExhausted { bits: u32, what: String },
    #[error("inequality has no finite bound below 10^{ceiling_exp}")]
    Unbounded { ceiling_exp: u32 },
    #[error("lattice scaling constant {scaling} too small for the coefficient box")]
    TooSmallScaling { scaling: String },
    #[error("Baker-Davenport reduction failed: {0}")]
    ReductionFailed(String),
    #[error("case {case} failed: {source}")]
    Family {
        case: String,
        #[source]
        source: Box<Error>,
    },
    #[error("bound for {symbol} would loosen from {old} to {new}")]
    LedgerLoosened {
        symbol: String,
        old: String,
        new: String,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted { .. })
    }
}
