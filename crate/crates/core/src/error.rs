use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// One or more parameter invariants were violated. Every violation is listed.
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("identification error: {0}")]
    Identification(String),

    #[error("rule cannot be inverted for initial inflation (f_pi = 0)")]
    NonInvertibleRule,

    #[error("not determinate under this instrument convention: {0}")]
    NotDeterminateUnderConvention(String),

    #[error("singular stable projection: {0}")]
    SingularProjection(String),

    /// An internal consistency check failed; this signals a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParams(vec![msg.into()])
    }

    /// Short machine-readable tag, used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSystem(_) => "invalid_system",
            Error::InvalidParams(_) => "invalid_params",
            Error::Identification(_) => "identification",
            Error::NonInvertibleRule => "non_invertible_rule",
            Error::NotDeterminateUnderConvention(_) => "not_determinate",
            Error::SingularProjection(_) => "singular_projection",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
