use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("element is not in the group")]
    NotInGroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("inclusion-exclusion cap exceeded: {r} maximal classes > {cap}; use Monte Carlo")]
    InclusionExclusionCap { r: usize, cap: usize },

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error("invalid module action: {0}")]
    Action(String),

    #[error("action is reducible")]
    Reducible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("waiting time exceeded {0} draws in one trial")]
    RunawayTrial(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("defect: {0}")]
    Defect(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } | Error::InclusionExclusionCap { .. } => 3,
            Error::Defect(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
