use thiserror::Error;

use crate::rational::ParseRationalError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable universe mismatch: expected {expected} variables, found {found}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("element has mixed parity")]
    MixedParity,
    #[error("expected an {expected} element")]
    WrongParity { expected: &'static str },
    #[error("series must have zero constant term")]
    NonzeroConstant,
    #[error("bracket {pair} has constant term {found}, expected 1; re-pivot the symplectic subspace")]
    BadNormalization { pair: String, found: String },
    #[error("iteration stalled at error degree {degree}; the input bracket is not of the required form")]
    NonConvergence { degree: u32 },
    #[error("a negative power of hbar survived cancellation")]
    NegativeHbarPower,
    #[error("odd pair has a self-bracket with invertible constant term; normalize it instead")]
    InvertibleSelfBracket,
    #[error("odd pair has unequal weights {0} and {1}; no equivariant flattening available")]
    InhomogeneousOddPair(i32, i32),
    #[error("pairing constant {0} is not the square of a rational")]
    IrrationalNormalization(String),
    #[error("restriction of the bivector to V is degenerate")]
    DegenerateSubspace,
    #[error("vector mixes even and odd generators")]
    MixedParityVector,
    #[error("non-homogeneous element: weights {0:?}")]
    NotHomogeneous(Vec<i32>),
    #[error("nonpositive weight {weight} on direction {name}")]
    NonpositiveWeight { name: String, weight: i32 },
    #[error("element is not in the image of the Rees map")]
    NotInReesImage,
    #[error("precision {have} is below the required {need}; raise the guard band")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("element is not in the span of the given basis")]
    NotInSpan,
    #[error("invalid algebra document: {0}")]
    Document(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Validation(String),
    #[error("grading: {0}")]
    Grading(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
