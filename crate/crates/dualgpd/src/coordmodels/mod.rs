//! Coordinate groupoids, double groupoids and their prolongations, with every
//! structure map an explicit polynomial map and every derived map exact.

pub mod algebroid;
pub mod check;
mod cotangent;
mod cotdouble;
mod double;
mod golden;
mod groupoid;
mod involution;
mod linear;
mod prolong;

pub use algebroid::{check_morphism, lie_algebroid, BundleMap, LieAlgebroidModel, Section};
pub use check::{Check, CheckMode, CheckReport, Witness};
pub use cotangent::{cotangent_groupoid, tangent_groupoid, tangent_vb, CotangentGroupoid};
pub use cotdouble::{core_projection, cotangent_double, CoreEmbedding, CotangentDoubleData};
pub(crate) use double::morphism_checks;
pub use double::{core_of_double, infer_base_morphism, m4_double_groupoid, CoordDoubleGroupoid, CoreGroupoid, DoubleMorphism};
pub use golden::{FrozenAffine, FrozenGroupoid};
pub use groupoid::{pair_groupoid, product_groupoid, vector_space_groupoid, CoordGroupoid, Family};
pub use involution::{canonical_j, jprime_maps, CanonicalInvolution, JPrimeMaps, SecondTangent};
pub use linear::LinearVbGroupoid;
pub use prolong::{prolonged_vb, Direction, Prolongation, ProlongedVb};

use thiserror::Error;

use crate::exactcalc::{ExactError, Mat, PolyMap};
use crate::fingpd::FingpdError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Fingpd(#[from] FingpdError),
    #[error("unregistered model family: {0}")]
    Unregistered(String),
    #[error("map is not onto: {0}")]
    NotSurjective(String),
    #[error("wrong shape: {0}")]
    Shape(String),
    #[error("arrows are not composable in {0}")]
    NotComposable(String),
    #[error("validation failed: {0}")]
    Invalid(String),
    #[error("linear data varies from point to point: {0}")]
    NotConstant(String),
    #[error("point is not in the core: {0}")]
    NotCorePoint(String),
    #[error("not a morphism: {0}")]
    NotMorphism(String),
}

/// Coordinates of the columns of `m` in the column basis `basis`.
pub(crate) fn express(basis: &Mat, m: &Mat, what: &str) -> Result<Mat, CoordError> {
    let cols = m
        .columns()
        .iter()
        .map(|c| basis.coords(c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CoordError::Invalid(format!("{what} leaves the expected subspace")))?;
    Ok(Mat::from_cols(basis.cols(), &cols))
}

/// Linear part of an affine structure map.
pub(crate) fn linear_part(f: &PolyMap) -> Mat {
    f.affine_parts().expect("registered families are affine").0
}
