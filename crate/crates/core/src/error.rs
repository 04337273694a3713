use alloc::string::String;

use crate::exactalg::Signature;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial {0} is not irreducible over the rationals")]
    Reducible(String),

    #[error("not a field extension: {0} has a root in the base field")]
    NotAFieldExtension(String),

    #[error("not an isometry generator: {0}")]
    NotAnIsometryGenerator(String),

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: Signature, found: Signature },

    #[error("no primitive norm-one element found within a budget of {budget} candidates")]
    NoPrimitiveNormOne { budget: usize },

    #[error("element is identically zero")]
    IdenticallyZero,

    #[error("precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("reducible or degenerate Hodge structure: {0}")]
    ReducibleStructure(String),

    #[error("not a CM field: {0}")]
    NotCmField(String),

    #[error("invalid polarization: (l.l) = {0} must be a positive integer")]
    InvalidPolarization(String),

    #[error("class is not positive: (l'.l') = {0}")]
    ClassNotPositive(String),

    #[error("class lies on the equator (m = 0); use the equator analysis")]
    EquatorClass,

    #[error("class is proportional to the polarization; the fibre is the original structure")]
    PoleClass,

    #[error("wrong branch: {0}")]
    WrongBranch(String),

    /// A computed quantity contradicts a proven identity. Never a user error.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// True for errors that signal a violated theorem rather than bad input.
    pub fn is_alarm(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
