//! Split double vector bundles over a single base point, their vertical and
//! horizontal duals, and the pairing between the two duals.
//!
//! A split bundle is `A ⊕ B ⊕ K` with side `A` (horizontal side), side `B`
//! (vertical side) and core `K`. An element is written `(a, b, k)`.

mod iso;
mod tangent;

pub use iso::{double_dual_iso, induced_iso, DoubleDualReport, DvbIso, PairingCondition, Sign};
pub use tangent::{tangent_model, TangentModel};

use serde::Serialize;
use thiserror::Error;

use crate::exactcalc::{vector, Mat, Rat, Sampler};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DvbError {
    #[error("component {what} has length {got}, expected {expected}")]
    Length { what: &'static str, expected: usize, got: usize },
    #[error("side components differ: {0}")]
    SideMismatch(&'static str),
    #[error("core covectors differ; the two dual elements lie over different points of K*")]
    KappaMismatch,
    #[error("pairing condition {condition:?} fails: {witness}")]
    Condition { condition: PairingCondition, witness: String },
    #[error("the two evaluations of the dual pairing disagree: {first} vs {second}")]
    Disagreement { first: String, second: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DvbDims {
    pub side_h: usize,
    pub side_v: usize,
    pub core: usize,
}

impl DvbDims {
    pub fn new(side_h: usize, side_v: usize, core: usize) -> Self {
        DvbDims { side_h, side_v, core }
    }

    pub fn total(&self) -> usize {
        self.side_h + self.side_v + self.core
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDvb {
    pub dims: DvbDims,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvbElement {
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    pub k: Vec<Rat>,
}

/// Element `(a, beta, kappa)` of the vertical dual `A ⊕ B* ⊕ K*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVElement {
    pub a: Vec<Rat>,
    pub beta: Vec<Rat>,
    pub kappa: Vec<Rat>,
}

/// Element `(alpha, b, kappa)` of the horizontal dual `A* ⊕ B ⊕ K*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualHElement {
    pub alpha: Vec<Rat>,
    pub b: Vec<Rat>,
    pub kappa: Vec<Rat>,
}

fn check_len(what: &'static str, expected: usize, v: &[Rat]) -> Result<(), DvbError> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(DvbError::Length { what, expected, got: v.len() })
    }
}

impl SplitDvb {
    pub fn new(dims: DvbDims, label: impl Into<String>) -> Self {
        SplitDvb { dims, label: label.into() }
    }

    pub fn element(&self, a: Vec<Rat>, b: Vec<Rat>, k: Vec<Rat>) -> Result<DvbElement, DvbError> {
        check_len("a", self.dims.side_h, &a)?;
        check_len("b", self.dims.side_v, &b)?;
        check_len("k", self.dims.core, &k)?;
        Ok(DvbElement { a, b, k })
    }

    pub fn dual_v_element(&self, a: Vec<Rat>, beta: Vec<Rat>, kappa: Vec<Rat>) -> Result<DualVElement, DvbError> {
        check_len("a", self.dims.side_h, &a)?;
        check_len("beta", self.dims.side_v, &beta)?;
        check_len("kappa", self.dims.core, &kappa)?;
        Ok(DualVElement { a, beta, kappa })
    }

    pub fn dual_h_element(&self, alpha: Vec<Rat>, b: Vec<Rat>, kappa: Vec<Rat>) -> Result<DualHElement, DvbError> {
        check_len("alpha", self.dims.side_h, &alpha)?;
        check_len("b", self.dims.side_v, &b)?;
        check_len("kappa", self.dims.core, &kappa)?;
        Ok(DualHElement { alpha, b, kappa })
    }

    pub fn random_element(&self, s: &mut Sampler) -> DvbElement {
        DvbElement { a: s.vector(self.dims.side_h), b: s.vector(self.dims.side_v), k: s.vector(self.dims.core) }
    }

    pub fn random_dual_v(&self, s: &mut Sampler) -> DualVElement {
        DualVElement { a: s.vector(self.dims.side_h), beta: s.vector(self.dims.side_v), kappa: s.vector(self.dims.core) }
    }

    pub fn random_dual_h(&self, s: &mut Sampler) -> DualHElement {
        DualHElement { alpha: s.vector(self.dims.side_h), b: s.vector(self.dims.side_v), kappa: s.vector(self.dims.core) }
    }

    /// Sides `(E^H, K*)`, core `(E^V)*`.
    pub fn dual_vertical(&self) -> SplitDvb {
        let d = self.dims;
        SplitDvb::new(DvbDims::new(d.side_h, d.core, d.side_v), format!("{}*V", self.label))
    }

    /// Sides `(K*, E^V)`, core `(E^H)*`.
    pub fn dual_horizontal(&self) -> SplitDvb {
        let d = self.dims;
        SplitDvb::new(DvbDims::new(d.core, d.side_v, d.side_h), format!("{}*H", self.label))
    }

    /// Same bundle with the two side structures exchanged.
    pub fn transpose(&self) -> SplitDvb {
        let d = self.dims;
        SplitDvb::new(DvbDims::new(d.side_v, d.side_h, d.core), format!("{}^t", self.label))
    }
}

impl DvbElement {
    pub fn zero(dims: DvbDims) -> Self {
        DvbElement { a: vector::zeros(dims.side_h), b: vector::zeros(dims.side_v), k: vector::zeros(dims.core) }
    }

    /// Addition in the bundle over the horizontal side: `(a, b1+b2, k1+k2)`.
    pub fn add_vertical(&self, other: &DvbElement) -> Result<DvbElement, DvbError> {
        if self.a != other.a {
            return Err(DvbError::SideMismatch("vertical addition needs equal a-components"));
        }
        Ok(DvbElement { a: self.a.clone(), b: vector::add(&self.b, &other.b), k: vector::add(&self.k, &other.k) })
    }

    /// Addition in the bundle over the vertical side: `(a1+a2, b, k1+k2)`.
    pub fn add_horizontal(&self, other: &DvbElement) -> Result<DvbElement, DvbError> {
        if self.b != other.b {
            return Err(DvbError::SideMismatch("horizontal addition needs equal b-components"));
        }
        Ok(DvbElement { a: vector::add(&self.a, &other.a), b: self.b.clone(), k: vector::add(&self.k, &other.k) })
    }

    pub fn scale_vertical(&self, t: &Rat) -> DvbElement {
        DvbElement { a: self.a.clone(), b: vector::scale(t, &self.b), k: vector::scale(t, &self.k) }
    }

    pub fn scale_horizontal(&self, t: &Rat) -> DvbElement {
        DvbElement { a: vector::scale(t, &self.a), b: self.b.clone(), k: vector::scale(t, &self.k) }
    }

    pub fn transpose(&self) -> DvbElement {
        DvbElement { a: self.b.clone(), b: self.a.clone(), k: self.k.clone() }
    }
}

impl DualVElement {
    /// The same point seen as an element of the split bundle `dual_vertical()`.
    pub fn as_element(&self) -> DvbElement {
        DvbElement { a: self.a.clone(), b: self.kappa.clone(), k: self.beta.clone() }
    }

    pub fn from_element(e: &DvbElement) -> Self {
        DualVElement { a: e.a.clone(), beta: e.k.clone(), kappa: e.b.clone() }
    }

    /// Evaluation on `xi` in the fibre over the same point of `E^H`.
    pub fn eval(&self, xi: &DvbElement) -> Result<Rat, DvbError> {
        if self.a != xi.a {
            return Err(DvbError::SideMismatch("vertical dual evaluates on elements over its own a"));
        }
        Ok(vector::dot(&self.beta, &xi.b) + vector::dot(&self.kappa, &xi.k))
    }
}

impl DualHElement {
    pub fn as_element(&self) -> DvbElement {
        DvbElement { a: self.kappa.clone(), b: self.b.clone(), k: self.alpha.clone() }
    }

    pub fn from_element(e: &DvbElement) -> Self {
        DualHElement { alpha: e.k.clone(), b: e.b.clone(), kappa: e.a.clone() }
    }

    pub fn eval(&self, xi: &DvbElement) -> Result<Rat, DvbError> {
        if self.b != xi.b {
            return Err(DvbError::SideMismatch("horizontal dual evaluates on elements over its own b"));
        }
        Ok(vector::dot(&self.alpha, &xi.a) + vector::dot(&self.kappa, &xi.k))
    }
}

/// Core covector of a vertical-dual element.
pub fn unfamiliar_projection(phi: &DualVElement) -> Vec<Rat> {
    phi.kappa.clone()
}

/// `<Φ, 0^V_X + k̄>` evaluated from the definition, for comparison with the projection.
pub fn core_evaluation(phi: &DualVElement, k: &[Rat]) -> Result<Rat, DvbError> {
    let xi = DvbElement { a: phi.a.clone(), b: vector::zeros(phi.beta.len()), k: k.to_vec() };
    phi.eval(&xi)
}

/// `<Ψ, ξ> - <Φ, ξ>` for `ξ = (Φ.a, Ψ.b, core)`.
pub fn pair_duals_via(phi: &DualVElement, psi: &DualHElement, core: &[Rat]) -> Result<Rat, DvbError> {
    if phi.kappa != psi.kappa {
        return Err(DvbError::KappaMismatch);
    }
    check_len("core", phi.kappa.len(), core)?;
    let xi = DvbElement { a: phi.a.clone(), b: psi.b.clone(), k: core.to_vec() };
    Ok(psi.eval(&xi)? - phi.eval(&xi)?)
}

/// Closed form in split coordinates: `<alpha, a> - <beta, b>`.
pub fn pair_duals_closed(phi: &DualVElement, psi: &DualHElement) -> Result<Rat, DvbError> {
    if phi.kappa != psi.kappa {
        return Err(DvbError::KappaMismatch);
    }
    Ok(vector::dot(&psi.alpha, &phi.a) - vector::dot(&phi.beta, &psi.b))
}

/// The duality pairing, computed from the definition (with zero core in ξ)
/// and from the closed form; the two must agree.
pub fn pair_duals(phi: &DualVElement, psi: &DualHElement) -> Result<Rat, DvbError> {
    let via = pair_duals_via(phi, psi, &vector::zeros(phi.kappa.len()))?;
    let closed = pair_duals_closed(phi, psi)?;
    if via != closed {
        return Err(DvbError::Disagreement {
            first: crate::exactcalc::scalar::to_string(&via),
            second: crate::exactcalc::scalar::to_string(&closed),
        });
    }
    Ok(via)
}

/// Matrix of the pairing between the fibres of `E^{*V}` and `E^{*H}` over `kappa`,
/// in the fibre coordinates `(a, beta)` and `(alpha, b)`.
pub fn pairing_matrix(e: &SplitDvb, kappa: &[Rat]) -> Result<Mat, DvbError> {
    let d = e.dims;
    let n = d.side_h + d.side_v;
    let left: Vec<DualVElement> = (0..n)
        .map(|i| {
            let u = vector::unit(n, i);
            DualVElement { a: u[..d.side_h].to_vec(), beta: u[d.side_h..].to_vec(), kappa: kappa.to_vec() }
        })
        .collect();
    let right: Vec<DualHElement> = (0..n)
        .map(|j| {
            let u = vector::unit(n, j);
            DualHElement { alpha: u[..d.side_h].to_vec(), b: u[d.side_h..].to_vec(), kappa: kappa.to_vec() }
        })
        .collect();
    let mut m = Mat::zeros(n, n);
    for (i, phi) in left.iter().enumerate() {
        for (j, psi) in right.iter().enumerate() {
            m.set(i, j, pair_duals_via(phi, psi, &vector::zeros(d.core))?);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::int;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn vertical_addition_in_split_form() {
        let e = SplitDvb::new(DvbDims::new(1, 1, 1), "E");
        let x = e.element(ints(&[1]), ints(&[2]), ints(&[3])).unwrap();
        let y = e.element(ints(&[1]), ints(&[4]), ints(&[5])).unwrap();
        assert_eq!(x.add_vertical(&y).unwrap(), e.element(ints(&[1]), ints(&[6]), ints(&[8])).unwrap());
        let z = e.element(ints(&[7]), ints(&[0]), ints(&[0])).unwrap();
        assert_eq!(z.add_vertical(&z.scale_vertical(&int(0))).unwrap(), z);
        assert!(x.add_horizontal(&y).is_err());
    }

    #[test]
    fn dual_dimensions() {
        let e = SplitDvb::new(DvbDims::new(2, 3, 4), "E");
        assert_eq!(e.dual_vertical().dims, DvbDims::new(2, 4, 3));
        assert_eq!(e.dual_horizontal().dual_vertical().dims, DvbDims::new(4, 2, 3));
        let z = SplitDvb::new(DvbDims::new(0, 0, 0), "Z");
        assert_eq!(z.dual_vertical().dims.total(), 0);
    }

    #[test]
    fn split_example_value() {
        let e = SplitDvb::new(DvbDims::new(1, 1, 1), "E");
        let phi = e.dual_v_element(ints(&[2]), ints(&[3]), ints(&[5])).unwrap();
        let psi = e.dual_h_element(ints(&[7]), ints(&[11]), ints(&[5])).unwrap();
        assert_eq!(pair_duals(&phi, &psi).unwrap(), int(-19));
        for k in [0, 1, -4] {
            assert_eq!(pair_duals_via(&phi, &psi, &ints(&[k])).unwrap(), int(-19));
        }
    }

    #[test]
    fn kappa_mismatch_is_rejected() {
        let e = SplitDvb::new(DvbDims::new(1, 1, 1), "E");
        let phi = e.dual_v_element(ints(&[2]), ints(&[3]), ints(&[5])).unwrap();
        let psi = e.dual_h_element(ints(&[7]), ints(&[11]), ints(&[6])).unwrap();
        assert_eq!(pair_duals(&phi, &psi), Err(DvbError::KappaMismatch));
    }

    #[test]
    fn unfamiliar_projection_reads_only_kappa() {
        let e = SplitDvb::new(DvbDims::new(2, 1, 2), "E");
        let phi = e.dual_v_element(ints(&[1, 2]), ints(&[3]), ints(&[4, 5])).unwrap();
        let moved = e.dual_v_element(ints(&[9, -1]), ints(&[3]), ints(&[4, 5])).unwrap();
        assert_eq!(unfamiliar_projection(&phi), unfamiliar_projection(&moved));
        let k = ints(&[2, -3]);
        assert_eq!(core_evaluation(&phi, &k).unwrap(), vector::dot(&unfamiliar_projection(&phi), &k));
    }

    #[test]
    fn zero_pairs_to_zero() {
        let e = SplitDvb::new(DvbDims::new(1, 2, 1), "E");
        let phi = DualVElement { a: ints(&[0]), beta: ints(&[0, 0]), kappa: ints(&[0]) };
        let psi = e.dual_h_element(ints(&[4]), ints(&[1, 2]), ints(&[0])).unwrap();
        assert_eq!(pair_duals(&phi, &psi).unwrap(), int(0));
    }
}
