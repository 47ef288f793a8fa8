//! Exact arithmetic kernel: rationals, sparse polynomials, matrices and polynomial maps.

mod mat;
mod poly;
mod polymap;
mod sample;
pub mod scalar;

pub use mat::{Mat, Solution};
pub use poly::Poly;
pub use polymap::{polymap_equal_on_samples, vf_bracket, EqualityMode, PolyMap};
pub use sample::Sampler;
pub use scalar::{int, rat, vector, Rat};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("index {index} out of range for {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("map is not affine: {0}")]
    NotAffine(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), ExactError> {
    if expected == got {
        Ok(())
    } else {
        Err(ExactError::DimensionMismatch { expected, got })
    }
}
