use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at eta = {eta}")]
    Pole { eta: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("not a group: {0}")]
    GroupAxiom(String),
    #[error("not an automorphism: {0}")]
    BadAutomorphism(String),
    #[error("base group element {element} has order {order}; 3-transposition property fails")]
    ThreeTranspositionViolation { element: String, order: usize },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("vectors belong to different spaces")]
    SpaceMismatch,

    #[error("eta = {0} is not an admissible parameter")]
    DisallowedEta(String),
    #[error("eta = {0} is unsafe for this ambient (pass an explicit override to proceed)")]
    UnsafeEta(String),
    #[error("adjoint of the axis is not diagonalisable over the given spectrum ({found} of {expected} dimensions)")]
    NonDiagonalizable { found: usize, expected: usize },
    #[error("spectrum values collide at eta = {0}")]
    SpectrumCollision(String),
    #[error("vector is not in the subalgebra")]
    NotInSubalgebra,
    #[error("fusion law check failed upstream: {0}")]
    FusionFailure(String),

    #[error("no standard flip for family {0:?}")]
    NoStandardFlip(String),
    #[error("permutation is not an involution")]
    NotInvolution,
    #[error("permutation is not an automorphism of the Fischer space")]
    NotAutomorphism,
    #[error("full enumeration refused: {points} points exceeds the limit of {limit}")]
    OversizedEnumeration { points: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
