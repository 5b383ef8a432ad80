use thiserror::Error;

use crate::algebra::AlgebraDescriptor;
use crate::metric::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra descriptor mismatch: {left:?} vs {right:?}")]
    DescriptorMismatch {
        left: AlgebraDescriptor,
        right: AlgebraDescriptor,
    },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("element data has length {got}, descriptor expects {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("element contains non-finite entries")]
    NonFinite,

    #[error("element is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("element is not positive (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),

    #[error("map `{map}` sent {point} to {image}, outside the domain")]
    DomainExit {
        map: String,
        point: Point,
        image: Point,
    },

    #[error("domain sampler failed: {0}")]
    SamplerFailure(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("R_solve is not a right inverse of `{map}` at {point} (R(R_solve(y)) = {reconstructed})")]
    BadInverse {
        map: String,
        point: Point,
        reconstructed: Point,
    },

    #[error("invalid contraction spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires a finite domain")]
    NotFiniteDomain,

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
