use thiserror::Error;

use crate::model::Domain;

/// Errors produced by model construction, inference and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain mismatch: expected {expected}, got {found}")]
    DomainMismatch { expected: Domain, found: Domain },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("value {value} is not a valid {domain} assignment entry")]
    InvalidAssignment { value: i8, domain: Domain },

    #[error("{what} = {value} exceeds the enumeration cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sample batch is empty")]
    EmptyBatch,

    #[error("width {0} has no exact rounding distribution; width 2 is required")]
    UnsupportedWidth(usize),

    #[error("rounding distribution assigns zero probability to a drawn sample")]
    ZeroProposalProbability,

    #[error("instance format: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
