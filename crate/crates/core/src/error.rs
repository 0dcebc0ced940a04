use thiserror::Error;

use crate::solver::AhlforsSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("square root requested at the branch point w = 0")]
    BranchPoint,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid geometry: {0}")]
    Geometry(#[from] GeometryError),

    #[error("point {z} lies within {floor:e} of the slit set")]
    NearSingularity {
        z: num_complex::Complex64,
        floor: f64,
    },

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("point {0} is outside the closed domain")]
    OutOfDomain(num_complex::Complex64),

    #[error("solver did not converge: {message}")]
    NonConvergence {
        message: String,
        best: Option<Box<AhlforsSolution>>,
    },

    #[error(
        "argument-principle count {raw} is not within 0.1 of an integer; increase the sample count"
    )]
    Resolution { raw: f64 },

    #[error("internal solver error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("circle radius must be positive and finite, got {0}")]
    BadRadius(f64),

    #[error("hole {index} is not strictly inside the outer circle")]
    HoleExceedsOuter { index: usize },

    #[error("holes {first} and {second} overlap or touch")]
    OverlappingHoles { first: usize, second: usize },

    #[error("slit set is empty")]
    EmptySlitSet,

    #[error("slit [{left}, {right}] has non-positive length")]
    DegenerateSlit { left: f64, right: f64 },

    #[error("slits {first} and {second} overlap or touch")]
    OverlappingSlits { first: usize, second: usize },

    #[error("non-finite coordinate in domain description")]
    NonFinite,

    #[error("base point is not inside the domain")]
    BasePointOutside,

    #[error("too few boundary samples: {0} < 8")]
    TooFewSamples(usize),

    #[error("malformed domain description: {0}")]
    Malformed(String),
}
