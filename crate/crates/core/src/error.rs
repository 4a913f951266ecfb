use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field degree {0} outside the supported range [2, 32]")]
    DegreeUnsupported(u32),
    #[error("invalid field spec: {0}")]
    InvalidFieldSpec(String),
    #[error("element bit pattern {bits:#x} does not fit a degree-{degree} field")]
    InvalidElement { bits: u64, degree: u32 },
    #[error("elements belong to different field contexts")]
    ContextMismatch,
    #[error("zero has no multiplicative inverse")]
    NonInvertibleZero,
    #[error("{0} does not divide the field degree")]
    InvalidSubfieldDegree(u32),
    #[error("{0} does not divide the multiplicative group order")]
    OrderNotDividing(u64),
    #[error("element does not lie in the degree-{0} subfield")]
    NotInSubfield(u32),
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("factor pattern inconsistent with the Weil sum value {q} (m = {m})")]
    PatternMismatch { m: u32, q: i64 },
    #[error("function is not invariant under the unit-circle coset action")]
    InvarianceViolated,
    #[error("n = {0} is not a supported family degree (expected 12, 20 or 28)")]
    UnsupportedN(u32),
    #[error("closed form for the character sum requires division by 5 to be exact (got {0})")]
    NonIntegralLambda(i64),
    #[error("no closed form applies to this (a, b) pair")]
    ClosedFormUnavailable,
    #[error("cross-check failure: {0}")]
    CrossCheckFailure(String),
    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
