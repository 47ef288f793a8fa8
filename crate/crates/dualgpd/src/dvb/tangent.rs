//! Tangent and cotangent double vector bundles of a trivial bundle `A = M x R^k`,
//! written at a single base point with all coordinates explicit.

use super::{pair_duals, DualHElement, DualVElement, DvbDims, DvbError, SplitDvb};
use crate::exactcalc::{vector, Rat};

/// Point of `T(A*)`: base point, covector, and their velocities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorVelocity {
    pub x: Vec<Rat>,
    pub phi: Vec<Rat>,
    pub xdot: Vec<Rat>,
    pub phidot: Vec<Rat>,
}

/// Point of `TA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorVelocity {
    pub x: Vec<Rat>,
    pub a: Vec<Rat>,
    pub xdot: Vec<Rat>,
    pub adot: Vec<Rat>,
}

/// Point of `T*(A*)`: over `(x, phi)`, with momentum `p` dual to `xdot` and `a` dual to `phidot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorMomentum {
    pub x: Vec<Rat>,
    pub phi: Vec<Rat>,
    pub p: Vec<Rat>,
    pub a: Vec<Rat>,
}

/// Point of `T*A`: over `(x, a)`, with `p` dual to `xdot` and `phi` dual to `adot`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorMomentum {
    pub x: Vec<Rat>,
    pub a: Vec<Rat>,
    pub p: Vec<Rat>,
    pub phi: Vec<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentModel {
    pub base_dim: usize,
    pub fiber_dim: usize,
}

pub fn tangent_model(base_dim: usize, fiber_dim: usize) -> TangentModel {
    TangentModel { base_dim, fiber_dim }
}

fn same(what: &'static str, u: &[Rat], v: &[Rat]) -> Result<(), DvbError> {
    if u == v {
        Ok(())
    } else {
        Err(DvbError::SideMismatch(what))
    }
}

impl TangentModel {
    /// `TA` as a bundle over `A`: sides `A`, `TM`; core `A`.
    pub fn tangent(&self) -> SplitDvb {
        SplitDvb::new(DvbDims::new(self.fiber_dim, self.base_dim, self.fiber_dim), "TA")
    }

    /// `T*A` over `A`: sides `A`, `A*`; core `T*M`.
    pub fn cotangent(&self) -> SplitDvb {
        SplitDvb::new(DvbDims::new(self.fiber_dim, self.fiber_dim, self.base_dim), "T*A")
    }

    /// Derivative of the fibre pairing along curves: `<phidot, a> + <phi, adot>`.
    pub fn tangent_pairing(&self, v: &CovectorVelocity, xi: &VectorVelocity) -> Result<Rat, DvbError> {
        same("base points differ", &v.x, &xi.x)?;
        same("base velocities differ", &v.xdot, &xi.xdot)?;
        Ok(vector::dot(&v.phidot, &xi.a) + vector::dot(&v.phi, &xi.adot))
    }

    pub fn pair_cotangent_dual(&self, f: &CovectorMomentum, v: &CovectorVelocity) -> Result<Rat, DvbError> {
        same("base points differ", &f.x, &v.x)?;
        same("covectors differ", &f.phi, &v.phi)?;
        Ok(vector::dot(&f.p, &v.xdot) + vector::dot(&f.a, &v.phidot))
    }

    pub fn pair_cotangent(&self, f: &VectorMomentum, xi: &VectorVelocity) -> Result<Rat, DvbError> {
        same("base points differ", &f.x, &xi.x)?;
        same("fibre points differ", &f.a, &xi.a)?;
        Ok(vector::dot(&f.p, &xi.xdot) + vector::dot(&f.phi, &xi.adot))
    }

    /// `T*(A*) -> T*A`, `(x, phi, p, a) -> (x, a, -p, phi)`.
    pub fn reversal(&self, f: &CovectorMomentum) -> VectorMomentum {
        VectorMomentum { x: f.x.clone(), a: f.a.clone(), p: vector::neg(&f.p), phi: f.phi.clone() }
    }

    pub fn reversal_inverse(&self, g: &VectorMomentum) -> CovectorMomentum {
        CovectorMomentum { x: g.x.clone(), phi: g.phi.clone(), p: vector::neg(&g.p), a: g.a.clone() }
    }

    /// `T*A` as the vertical dual of `TA`.
    pub fn cotangent_as_dual(&self, g: &VectorMomentum) -> DualVElement {
        DualVElement { a: g.a.clone(), beta: g.p.clone(), kappa: g.phi.clone() }
    }

    /// `T(A*)` as the horizontal dual of `TA`: pairs with `(x, a, xdot, adot)` by the tangent pairing.
    pub fn identification(&self, v: &CovectorVelocity) -> DualHElement {
        DualHElement { alpha: v.phidot.clone(), b: v.xdot.clone(), kappa: v.phi.clone() }
    }

    /// Pairing of `T*(A*)` and `T(A*)` induced by the duality of the two duals of `TA`.
    pub fn induced_pairing_tangent(&self, f: &CovectorMomentum, v: &CovectorVelocity) -> Result<Rat, DvbError> {
        same("base points differ", &f.x, &v.x)?;
        pair_duals(&self.cotangent_as_dual(&self.reversal(f)), &self.identification(v))
    }

    /// `TA` as the vertical dual of `T*A`.
    pub fn tangent_as_dual(&self, xi: &VectorVelocity) -> DualVElement {
        DualVElement { a: xi.a.clone(), beta: xi.adot.clone(), kappa: xi.xdot.clone() }
    }

    /// `T(A*)` as the horizontal dual of `T*A`, through the dual of the inverse reversal.
    pub fn reversal_dual(&self, v: &CovectorVelocity) -> DualHElement {
        DualHElement { alpha: v.phidot.clone(), b: v.phi.clone(), kappa: vector::neg(&v.xdot) }
    }

    /// Pairing of `TA` and `T(A*)` induced by the duality of the two duals of `T*A`.
    pub fn induced_pairing_cotangent(&self, xi: &VectorVelocity, v: &CovectorVelocity) -> Result<Rat, DvbError> {
        same("base points differ", &xi.x, &v.x)?;
        pair_duals(&self.tangent_as_dual(xi), &self.reversal_dual(v))
    }
}
