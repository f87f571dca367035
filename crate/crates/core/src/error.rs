use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The request is well formed but exceeds an enumeration or size budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn over_budget<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ResourceLimit(msg.into()))
}

/// Enumeration budget, expressed as log2 of the largest search allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub bits: u32,
}

impl Budget {
    pub const DEFAULT_BITS: u32 = 26;

    pub fn new(bits: u32) -> Self {
        Self { bits }
    }

    pub(crate) fn check(&self, what: &str, needed_bits: u32) -> Result<()> {
        if needed_bits > self.bits {
            return over_budget(format!(
                "{what} needs 2^{needed_bits} steps, budget is 2^{}",
                self.bits
            ));
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_BITS)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.bits)
    }
}
