use thiserror::Error;

/// Errors raised by the library and mapped onto CLI exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("solver did not converge: {msg} (last residual {residual:e})")]
    Solver { msg: String, residual: f64 },
    #[error("regularity failure: {0}")]
    Regularity(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("integrability: {0}")]
    Integrability(String),
    #[error("config: {0}")]
    Config(String),
    #[error("unknown key: {0}")]
    Unknown(String),
    #[error("io: {0}")]
    Io(String),
    #[error("[{stage}] {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wrap with the name of the pipeline stage that raised it.
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    /// Stable process exit code: 2 config, 3 contract, 4 divergence, 5 integrability.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Config(_) | Error::Unknown(_) | Error::Io(_) => 2,
            Error::Divergence(_) => 4,
            Error::Integrability(_) => 5,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
