use num_complex::Complex64;
use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series with zero constant term")]
    DivisionByZeroConstantTerm,
    #[error("series has nonzero constant term {0}; cannot divide by z")]
    NonzeroConstantTerm(Complex64),
    #[error("inner series of a composition has nonzero constant term {0}")]
    InnerConstantTermNonzero(Complex64),
    #[error("{op} needs constant term {expected}, got {found}")]
    BadConstantTerm {
        op: &'static str,
        expected: f64,
        found: Complex64,
    },
    #[error("series is not normalized (c0 = {c0}, c1 = {c1})")]
    NotNormalized { c0: Complex64, c1: Complex64 },
    #[error("truncation order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("cannot parse series literal: {0}")]
    Parse(String),

    #[error("index n = {0} is out of range (need n >= 2)")]
    BadIndex(i64),
    #[error("unknown function id `{0}`")]
    UnknownId(String),
    #[error("bad parameters for `{id}`: {reason}")]
    BadParams { id: String, reason: String },
    #[error("pole at z = {0}")]
    PoleAtPoint(Complex64),
    #[error("f vanishes at z = {0}")]
    ZeroOfF(Complex64),
    #[error("denominator polynomial vanishes in the unit disc near z = {0}")]
    DenominatorVanishes(Complex64),

    #[error("evaluation failed at z = {z}: {reason}")]
    EvaluationFailure { z: Complex64, reason: String },
    #[error("boundary grid must have at least 256 points, got {0}")]
    InvalidGrid(usize),
    #[error("radius {0} outside (0, 1]")]
    InvalidRadius(f64),
    #[error("tolerance {0} is below the supported minimum 1e-9")]
    InvalidTolerance(f64),
    #[error("domain error: {0}")]
    DomainError(String),

    #[error("unsupported Toeplitz shape q = {q}, n = {n}")]
    UnsupportedShape { q: usize, n: usize },
    #[error("coefficient index {needed} exceeds the working order {order}")]
    OrderTooLow { needed: usize, order: usize },
    #[error("reverted coefficient b{index} = {computed} disagrees with closed form {closed}")]
    ClosedFormMismatch {
        index: usize,
        computed: Complex64,
        closed: Complex64,
    },

    #[error("unknown search target `{0}`")]
    UnknownTarget(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::UnknownId(_)
                | Error::BadParams { .. }
                | Error::BadIndex(_)
                | Error::UnknownTarget(_)
                | Error::InvalidConfig(_)
                | Error::InvalidGrid(_)
                | Error::InvalidRadius(_)
                | Error::InvalidTolerance(_)
                | Error::UnsupportedShape { .. }
                | Error::InvalidOrder(_)
                | Error::NotNormalized { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
