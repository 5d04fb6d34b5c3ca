use alloc::string::String;
use alloc::vec::Vec;

use crate::VertexSet;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is not ancestral: {0}")]
    NotAncestral(String),

    #[error("{what} over capacity: n = {n}, cap = {cap}")]
    Capacity {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error(
        "insufficient samples for CI test ({x}, {y} | {z:?}): need more than {needed}, have {have}"
    )]
    InsufficientSamples {
        x: usize,
        y: usize,
        z: VertexSet,
        needed: usize,
        have: usize,
    },

    #[error("singular correlation submatrix for CI test ({x}, {y} | {z:?})")]
    SingularMatrix { x: usize, y: usize, z: VertexSet },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("inconsistent orientation: {reason}")]
    Inconsistent { reason: String, trace: Vec<String> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
