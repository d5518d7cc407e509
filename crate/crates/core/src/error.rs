use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid shape: {0}")]
    InvalidShape(String),
    #[error("vertex {vertex} is not in {shape}")]
    InvalidVertex { vertex: String, shape: String },
    #[error("rank {rank} is outside 1..={count}")]
    RankOutOfRange { rank: u64, count: u64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid weight scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid instance file: {0}")]
    InstanceFormat(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn budget(
        what: &'static str,
        needed: impl Into<u128>,
        limit: impl Into<u128>,
    ) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.into(),
            limit: limit.into(),
        }
    }
}
