use thiserror::Error;

/// Everything that can go wrong while building or checking an object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands that do not belong together, e.g. elements of different groups.
    #[error("structural mismatch: {0}")]
    Structural(String),
    /// An input outside the mathematical domain of the operation.
    #[error("{0}")]
    Domain(String),
    /// An input that is well formed but larger than the configured cap.
    #[error("{what} is {needed}, which exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    /// A theorem-level invariant failed; this is a bug, never a user error.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(
        what: &'static str,
        needed: impl Into<u128>,
        cap: impl Into<u128>,
    ) -> Self {
        Error::Capacity {
            what,
            needed: needed.into(),
            cap: cap.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
