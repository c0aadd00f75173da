use crate::arith::Rational;
use thiserror::Error;

/// A rational point where a polynomial is negative, together with the value there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub t: Rational,
    pub value: Rational,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    InvalidRational(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("leading coefficient is not positive")]
    NonPositiveLeadingCoefficient,
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("precision escalation exhausted at {bits} bits")]
    PrecisionExhausted { bits: u64 },
    #[error("product over the given roots is not real")]
    NonRealProduct,
    #[error("root {index} does not lie in the open upper half-plane")]
    LowerHalfPlaneRoot { index: usize },
    #[error("polynomial is not nonnegative: value {} at t = {}", .0.value, .0.t)]
    NotPositive(Witness),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("empty interval: left endpoint must be below right endpoint")]
    EmptyInterval,
    #[error("degree {degree} exceeds the requested transform degree {requested}")]
    DegreeUnderflow { degree: usize, requested: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("invalid root: {0}")]
    InvalidRoot(String),
    #[error("certificate parse error at {}: {message}", if pointer.is_empty() { "the document root" } else { pointer.as_str() })]
    CertParse { pointer: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
