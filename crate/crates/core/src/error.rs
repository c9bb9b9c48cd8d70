use thiserror::Error;

/// Errors raised by body construction, model evaluation and the verifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("base point lies outside the body")]
    OutsideBody,

    #[error("base point too close to the boundary (1 - x'Qx = {0:e})")]
    TooCloseToBoundary(f64),

    #[error("iteration cap exceeded in {0}")]
    NonConvergent(&'static str),

    #[error("gauge is not differentiable at y = 0")]
    ApexDirection,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("point is not a member of the model")]
    NotMember,

    #[error("point is not on the center of the model")]
    NotInCenter,

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("finite-difference stencil leaves the domain of the field")]
    StencilEscape,

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("could not draw a sample from the safe region after {0} attempts")]
    SamplingFailure(usize),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
