use thiserror::Error;

use crate::localfield::GroupParams;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group parameters differ: {0} vs {1}")]
    ParamMismatch(GroupParams, GroupParams),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot parse `{text}`: {reason}")]
    Parse { text: String, reason: String },
    #[error("outside model resolution: {0}")]
    Resolution(String),
    #[error("model spaces differ")]
    SpaceMismatch,
    #[error("point sets live in different ambients")]
    AmbientMismatch,
    #[error("rank deficient: eigenvalue {eigenvalue:e} is at or below tolerance {tol:e}")]
    RankDeficient { eigenvalue: f64, tol: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ParamMismatch(..) => "param_mismatch",
            Error::Argument(_) => "argument",
            Error::Parse { .. } => "parse",
            Error::Resolution(_) => "resolution",
            Error::SpaceMismatch => "space_mismatch",
            Error::AmbientMismatch => "ambient_mismatch",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::NonFinite => "non_finite",
            Error::NotHermitian(_) => "not_hermitian",
            Error::Invariant(_) => "invariant",
        }
    }

    /// True for failures of an internal consistency check rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
