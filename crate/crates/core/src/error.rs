use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: u8, right: u8 },
    #[error("generator count {0} exceeds the cap of {1}")]
    TooManyGenerators(usize, usize),
    #[error("generator index {index} out of range for {generators} generators")]
    GeneratorOutOfRange { index: usize, generators: u8 },
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("element has mixed parity")]
    MixedParity,
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("variable tables differ")]
    TableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid variable table: {0}")]
    InvalidTable(String),
    #[error("negative exponent on non-Laurent variable `{0}`")]
    NegativeExponent(String),
    #[error("odd entry in a matrix that requires even entries at ({row}, {col})")]
    OddEntry { row: usize, col: usize },
    #[error("not an even supermatrix: entry ({row}, {col}) has the wrong parity")]
    NotEvenSupermatrix { row: usize, col: usize },
    #[error("Berezinian undefined: {0}")]
    BerUndefined(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("y[{0}] is not invertible (zero body)")]
    NonInvertibleY(usize),
    #[error("spectrum entry {0} is not even")]
    NonEvenSpectrum(String),
    #[error("|body(y)| must increase strictly; violated at index {0}")]
    UnorderedBodies(usize),
    #[error("y[{0}] and y[{1}] have bodies of equal magnitude")]
    DuplicateBodyMagnitude(usize, usize),
    #[error("region index {s} outside [0, {m}]")]
    InvalidRegion { s: usize, m: usize },
    #[error("invalid window or range: {0}")]
    InvalidRange(String),
    #[error("L is not linear in the even argument: {0}")]
    NonlinearInEvenArguments(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("delta-function arguments coincide on `{0}`")]
    DuplicateDeltaArgument(String),
    #[error("delta-function on non-even variable `{0}`")]
    OddDeltaArgument(String),
    #[error("not a full delta product: {0}")]
    NotFullProduct(String),
    #[error("descent residual is nonzero for chart {0}")]
    DescentResidual(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
}
