//! Poisson bivectors, Poisson groupoids and double groupoids, the duality maps between
//! the side algebroids, and the checks built on them.

mod bivector;
mod duality;
mod groupoid;
mod lagroupoid;
mod lapvb;

pub use bivector::{
    algebroid_from_linear_poisson, exterior_derivative, lie_derivative, lie_poisson_checks, lie_poisson_from_algebroid,
    standard_symplectic_matrix, OneForm, PolyBivector,
};
pub use duality::{
    compute_dmaps, core_poisson, verify_side_duality, verify_thm_pairs, CorePoisson, DMaps, LieBialgebroidModel, SideDuality,
    SideStructure, ThmPairs, MIN_SECTION_PAIRS,
};
pub use lagroupoid::{la_groupoid_checks, verify_needed, verify_needed_with, NeededFault, NeededReport};
pub use lapvb::{
    form_family, morphic_section, morphic_section_checks, perturbed_section, verify_lapvb, zero_pair_groupoid, LapvbDirection, LapvbReport,
    MorphicSectionReport, MIN_SECTIONS,
};
pub use groupoid::{
    check_multiplicative, pair_with_reversed, symplectic_double_m4, symplectic_pair_groupoid, zero_double_m4, DoublePredicates,
    Multiplicativity, PoissonCoordDouble, PoissonCoordGroupoid,
};

use thiserror::Error;

use crate::coordmodels::CoordError;
use crate::exactcalc::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error("wrong shape: {0}")]
    Shape(String),
    #[error("bivector is not antisymmetric at ({i}, {j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Schouten bracket [π, π] does not vanish: {0}")]
    NotPoisson(String),
    #[error("invalid Lie algebroid: {0}")]
    InvalidAlgebroid(String),
    #[error("bivector is not linear: {0}")]
    NotLinear(String),
    #[error("structure varies from point to point: {0}")]
    NotConstant(String),
    #[error("predicate failed: {0}")]
    Predicate(String),
}
