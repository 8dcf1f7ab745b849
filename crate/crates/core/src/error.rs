use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("permutation must have at least one entry")]
    EmptyPermutation,
    #[error("value {value} is outside 1..={n}")]
    ValueOutOfRange { value: usize, n: usize },
    #[error("value {0} appears more than once")]
    RepeatedValue(usize),
    #[error("positions must be distinct and within 1..={n}, got {j} and {j2}")]
    InvalidTransposition { j: usize, j2: usize, n: usize },
    #[error("size {n} is outside the allowed range 1..={max_n}")]
    SizeGuard { n: usize, max_n: usize },
    #[error("index {index} is outside {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular system: X_0 = 0")]
    SingularSystem,
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("T_i is only defined on bad elements; [{j}, {perm}] is {i}-good")]
    GoodElement { i: usize, j: usize, perm: String },
    #[error("solution failed the residual check in equation {0}")]
    Residual(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
