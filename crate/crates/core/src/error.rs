use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OchaError {
    #[error("length mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid graded space: {0}")]
    InvalidSpace(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("operands live over different spaces")]
    SpaceMismatch,

    #[error("component ({ell},{k}) lies outside the validity window {window}")]
    OutsideWindow { ell: usize, k: usize, window: usize },

    #[error("window underflow: {0}")]
    WindowUnderflow(String),

    #[error("arity {arity} exceeds the supported maximum for a {dim}-dimensional space")]
    ArityTooLarge { arity: usize, dim: usize },

    #[error("invalid symplectic form: {0}")]
    InvalidForm(String),

    #[error("cochain is not cyclic")]
    NotCyclic,

    #[error("structure has no unit")]
    MissingUnit,

    #[error("structure has no symplectic form")]
    MissingForm,

    #[error("unit must be a multiple of a single basis vector")]
    UnitNotBasis,

    #[error("structure check failed: {0}")]
    StructureCheck(String),

    #[error("calibration impossible: {0}")]
    Calibration(String),

    #[error("malformed expression: {0}")]
    MalformedExpr(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("characteristic {p} divides {n}")]
    CharacteristicDivides { p: u64, n: u64 },

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, OchaError>;
