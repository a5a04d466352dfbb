use thiserror::Error;

use crate::subspace::SubspacePreconditions;
use crate::topology::TopologyReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("soft values belong to different universes")]
    UniverseMismatch,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    /// The operation is not defined for these arguments.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("family is not a soft e-topology ({} violation(s))", .0.violations.len())]
    InvalidTopology(Box<TopologyReport>),
    #[error("subspace preconditions fail ({} violation(s))", .0.violation_count())]
    Subspace(Box<SubspacePreconditions>),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by calling an operation outside its domain of
    /// definition, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_) | Error::InvalidTopology(_) | Error::Subspace(_)
        )
    }
}
