use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("letter x{index} is out of range for an alphabet of size {q}")]
    InvalidLetter { index: usize, q: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("inverse letters are not available in mode A")]
    InverseInModeA,
    #[error("operation requires mode B")]
    UnsupportedMode,
    #[error("{0} is not prime; only prime fields are supported")]
    NotPrime(u64),
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("closure exceeded the cap of {cap} (reached {reached})")]
    Inconclusive { cap: usize, reached: usize },
    #[error("singular linear system over {classes} classes")]
    Singular { classes: usize },
    #[error("value {0} lies outside the nonnegative q-adic rationals")]
    OutsideImage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
