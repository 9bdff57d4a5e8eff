use thiserror::Error;

use crate::words::Word;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet mismatch: {left} vs {right} variables")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("letter {letter} outside alphabet 1..={n}")]
    LetterOutOfRange { letter: u32, n: usize },

    #[error("embedding targets {found}, expected {expected}")]
    EmbeddingTarget { expected: Word, found: Word },

    #[error("division by zero")]
    DivisionByZero,

    #[error("image {index} has a constant term; morphism images must lie in the maximal ideal")]
    ImageNotInMaximalIdeal { index: usize },

    #[error("expected {expected} images, got {found}")]
    ImageCount { expected: usize, found: usize },

    #[error("series is not a unit (constant term is zero)")]
    NotAUnit,

    #[error("jacobian is singular: {matrix}")]
    SingularJacobian { matrix: String },

    #[error("morphism is not an endomorphism ({source_vars} -> {target_vars} variables)")]
    NotEndomorphism { source_vars: usize, target_vars: usize },

    #[error("cannot chain morphisms: {left} target variables vs {right} source variables")]
    ChainMismatch { left: usize, right: usize },

    #[error("point has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("radius {index} is not positive")]
    NonPositiveRadius { index: usize },

    #[error("polynomial is not homogeneous (degrees {first} and {second})")]
    NotHomogeneous { first: usize, second: usize },

    #[error("generator {generator} does not vanish at sample point {point}")]
    NonVanishing { generator: usize, point: usize },

    #[error("chart {chart} is not valid for projective dimension {n}")]
    BadChart { chart: usize, n: usize },

    #[error("chart {chart} is repeated")]
    RepeatedChart { chart: usize },

    #[error("point lies off chart {chart}: its coordinate there is zero")]
    ZeroCoordinate { chart: usize },

    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),

    #[error("malformed input: {0}")]
    Format(String),
}
