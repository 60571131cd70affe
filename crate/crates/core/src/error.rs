use thiserror::Error;

use crate::numerics::NumericsError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// A comparison stayed UNKNOWN at the working precision.
    #[error("could not certify {what} at {precision} bits")]
    Uncertified { what: String, precision: u32 },
    /// A certified comparison came out the wrong way.
    #[error("certified false: {0}")]
    Refuted(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn uncertified(what: impl Into<String>, precision: u32) -> Self {
        Error::Uncertified {
            what: what.into(),
            precision,
        }
    }

    /// Whether more precision could plausibly fix this.
    pub fn is_uncertified(&self) -> bool {
        matches!(self, Error::Uncertified { .. })
    }
}

/// Turn a certified comparison into a proof step.
pub(crate) fn require(c: crate::numerics::Certainty, what: &str, precision: u32) -> Result<()> {
    use crate::numerics::Certainty;
    match c {
        Certainty::True => Ok(()),
        Certainty::False => Err(Error::Refuted(what.to_string())),
        Certainty::Unknown => Err(Error::uncertified(what, precision)),
    }
}
