use thiserror::Error;

/// Errors raised while parsing or validating input data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("malformed crossing tuple at {location}: {reason}")]
    MalformedTuple { location: String, reason: String },
    #[error("arc multiplicity: label {label} occurs {count} times (expected 2)")]
    ArcMultiplicity { label: usize, count: usize },
    #[error("diagram components do not close up: {reason}")]
    NonClosing { reason: String },
    #[error("component count mismatch: header says {declared}, diagram has {actual}")]
    ComponentMismatch { declared: usize, actual: usize },
    #[error("expected a knot (1 component), got {components} components")]
    NotAKnot { components: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a knot diagram: {0}")]
    NotAKnotDiagram(String),
}

/// Errors raised when a computed object violates a structural invariant.
/// These signal bugs or unusable inputs rather than malformed syntax.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("d^2 != 0 at generator {index}")]
    DifferentialNotSquareZero { index: usize },
    #[error("differential does not lower homological grading by 1: {from} -> {to}")]
    BadGradingStep { from: i64, to: i64 },
    #[error("differential raises filtration grading: {from} -> {to}")]
    FiltrationRaised { from: i64, to: i64 },
    #[error("coefficient request invalid: {0}")]
    BadCoefficients(String),
    #[error("spectral sequence survivor count {found}, expected {expected}")]
    SurvivorCount { found: usize, expected: usize },
    #[error("grading normalization failed: {0}")]
    Normalization(String),
    #[error("grading parity violation: {0}")]
    ParityViolation(String),
    #[error("polynomial is not staircase-admissible: {0}")]
    NotStaircase(String),
    #[error("basepoint-free bigon found between generators {from} and {to}")]
    BasepointFreeBigon { from: usize, to: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Top-level error for the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

pub type Result<T> = std::result::Result<T, Error>;
