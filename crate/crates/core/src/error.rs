use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("basis column {column} is linearly dependent on earlier columns")]
    InvalidBasis { column: usize },
    #[error("not a complex: d^{} d^{degree} is nonzero", degree + 1)]
    ComplexInvalid { degree: i32 },
    #[error("shape mismatch: {what}")]
    ShapeMismatch { what: String },
    #[error("algebra axiom fails: {what}")]
    NotAnAlgebra { what: String },
    #[error("bimodule mismatch: {what}")]
    BimoduleMismatch { what: String },
    #[error("not a cocycle: {witness}")]
    NotACocycle { witness: String },
    #[error("not an ideal: {what}")]
    NotAnIdeal { what: String },
    #[error("exactness fails at {spot}: {what}")]
    ExactnessFailure { spot: String, what: String },
    #[error("not a chain map: {what}")]
    NotAChainMap { what: String },
    #[error("unknown preset {name:?}")]
    UnknownPreset { name: String },
    #[error("depth {depth} too small: need at least {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("degree window exceeded: {what}")]
    WindowExceeded { what: String },
    #[error("mismatched parameters: {what}")]
    MismatchedParameters { what: String },
    #[error("obstruction class is nonzero at {monomial}")]
    Obstructed { monomial: String },
    #[error("{what}")]
    Invalid { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
