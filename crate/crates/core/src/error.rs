use thiserror::Error;

/// Where a hydrogenic field cannot be evaluated from its spherical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    Origin,
    PolarAxis,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular point {point:?} ({kind:?}); quadrature nodes never land here")]
    SingularPoint { point: [f64; 3], kind: Singularity },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("cannot parse state spec at token `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
