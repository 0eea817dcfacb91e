use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured maximum {max}")]
    LimitExceeded { what: &'static str, value: u64, max: u64 },

    #[error("{a} is not coprime to {n}")]
    NotCoprime { a: u64, n: u64 },

    #[error("no primitive root exists modulo {0}")]
    NoPrimitiveRoot(u64),

    #[error("character modulus {found} does not match the required modulus {expected}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("unknown character {0}")]
    UnknownCharacter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("zero file is missing the mandatory '# complete_to <H>' header")]
    MissingCompletenessHeader,

    #[error("line {line}: real part {beta} outside (0, 1)")]
    BetaOutOfRange { line: usize, beta: f64 },

    #[error("zero data for {character} is complete only to height {available}, requested {requested}")]
    IncompleteData {
        character: String,
        requested: f64,
        available: f64,
    },

    #[error("more than one zero qualifies as exceptional: {0}")]
    LemmaViolation(String),

    #[error("parameter outside the supported range: {0}")]
    RangeViolation(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("grid of size {grid} is too small, need at least {required}")]
    GridTooSmall { grid: usize, required: usize },

    #[error("element {element} lies outside [1, {n}]")]
    ElementOutOfRange { element: u64, n: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
