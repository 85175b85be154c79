use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}
