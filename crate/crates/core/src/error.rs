use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor an odd prime")]
    InvalidCharacteristic(i64),
    #[error("a weight needs at least one part")]
    EmptyWeight,
    #[error("invalid replacement: {0}")]
    InvalidReplace(String),
    #[error("signed set would contain both {0} and its barred copy")]
    SignedCollision(i64),
    #[error("mark {mark} outside [1..{n}]")]
    MarkOutOfRange { mark: i64, n: i64 },
    #[error("value {value} does not belong to {mode} mode")]
    ModeMismatch { value: String, mode: &'static str },
    #[error("reduction contains a plus: {0}")]
    NotAllMinus(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("sigma needs a < b, got a = {a}, b = {b}")]
    BadIndices { a: i64, b: i64 },
    #[error("division by x{a} - x{b} leaves remainder {remainder}")]
    NotDivisible { a: i64, b: i64, remainder: String },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("y{0} is substituted twice")]
    ConflictingSubstitution(i64),
    #[error("index {index} outside [1..{n}]")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("bad signed set: {0}")]
    BadSignedSet(String),
    #[error("closed form needs at most one odd element, got {0}")]
    UnsupportedShape(usize),
    #[error("evaluation needs p > 0")]
    CharacteristicZero,
    #[error("weight {0} is not dominant p-strict")]
    NotDominantPStrict(String),
    #[error("partition {0} is not p-strict")]
    NotPStrict(String),
    #[error("partition {0} is not restricted")]
    NotRestricted(String),
    #[error("index {0} is normal")]
    IsNormal(usize),
    #[error("index {0} is not normal")]
    NotNormal(usize),
    #[error("case analysis fell through: {0}")]
    Unreachable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
