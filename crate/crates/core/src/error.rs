use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or solver parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Bookkeeping invariants of a simulation state were violated.
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("solver failure: {0}")]
    Solver(String),
    /// A diagnostic was requested on data that cannot support it.
    #[error("diagnostic error: {0}")]
    Diagnostic(String),
    #[error("statistical test error: {0}")]
    Test(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
