//! Error taxonomy shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A solver/simulation configuration cannot produce meaningful output.
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed or inconsistent input data.
    #[error("data error: {0}")]
    Data(String),
    /// An iterative method failed to converge within its budget.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Not enough signal to evaluate the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// Target profile outside the class the planner supports.
    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),
    /// Spectrum contains no peak above the noise floor.
    #[error("no peak found: {0}")]
    NoPeak(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
