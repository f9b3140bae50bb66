use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("point ({x}, {y}) is outside the environment bounds")]
    OutOfBounds { x: f64, y: f64 },

    #[error("elevation data void under ({x}, {y})")]
    DataVoid { x: f64, y: f64 },

    #[error("speed model error: {0}")]
    Model(String),

    #[error("triangulation failed: {0}")]
    Triangulation(String),

    #[error("no directed path from origin to destination")]
    Connectivity,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("infeasible flow: {0}")]
    InfeasibleFlow(String),

    #[error("numerical failure in solver: {0}")]
    Numerical(String),

    #[error("solver did not reach optimality: {0}")]
    Solver(String),

    #[error("entropy undefined: no flow crosses the origin-destination bisector")]
    UndefinedEntropy,

    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
