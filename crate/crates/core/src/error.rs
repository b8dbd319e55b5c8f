use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("no wells: curvature is constant along the boundary")]
    NoWells,
    #[error("model assumption violated: {0}")]
    Assumption(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) | Error::Config(_) => 1,
            Error::InvalidCurve(_)
            | Error::NoWells
            | Error::Assumption(_)
            | Error::Resolution(_)
            | Error::InsufficientData(_) => 2,
            Error::Numerical(_) | Error::Io(_) | Error::Json(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
