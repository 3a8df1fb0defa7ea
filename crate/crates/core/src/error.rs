use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("support of {required} lattice points exceeds the budget of {budget}")]
    SupportTooLarge { required: u128, budget: u64 },

    #[error("quadrature with {nodes} nodes is below the required {required}")]
    InsufficientNodes { nodes: usize, required: usize },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("precision insufficient: relative disagreement {0:e} across tilts")]
    PrecisionInsufficient(f64),

    #[error("unknown or malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }
}
