use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{origin}:{line}: {message}")]
    Syntax { origin: String, line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(concircle_core::Error),
    #[error("sampling: {0}")]
    Sampling(String),
    #[error("no fixture file or bundled fixture named `{0}`")]
    UnknownFixture(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("suite {suite}: {source}")]
    Suite { suite: &'static str, source: concircle_core::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
