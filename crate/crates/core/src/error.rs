use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad experiment input (empty mask, out-of-bounds geometry, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Malformed or inconsistent configuration.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Asked for a statistic that does not exist (empty population,
    /// constant series in a correlation, ...).
    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
