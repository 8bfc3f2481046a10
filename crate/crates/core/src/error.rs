use std::io;

use thiserror::Error;

/// Errors raised by the solver suite.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {len} targets")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: field {field}: {message}")]
    Validation { field: String, message: String },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid tour: {0}")]
    InvalidTour(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
