use secpath_core::{DiagramError, SolveError, ValidateError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("need at least {min} points, found {found}")]
    TooFewPoints { found: usize, min: usize },
    #[error("fewer than two points inside the shrunken bounding box")]
    TooFewInterior,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("diagram: {0}")]
    Diagram(#[from] DiagramError),
    #[error("solver: {0}")]
    Solve(#[from] SolveError),
    #[error("verifier: {0}")]
    Validate(#[from] ValidateError),
}

pub type Result<T> = std::result::Result<T, Error>;
