use std::collections::BTreeMap;

use super::groupoid::{CoordGroupoid, Family};
use super::CoordError;
use crate::exactcalc::{vector, Mat, PolyMap, Rat};
use crate::fingpd::{dual_core_elements, pradines_dual, CompositionData, FinVBGroupoid, FiniteGroupoid};

/// VB-groupoid `(Ω; G, A; M)` over a coordinate groupoid whose fibre data are the same
/// matrices at every arrow, as for every prolongation of an affine family.
/// `comp.domain` spans the compatible pairs `(η, ξ)` (η over `h`), `comp.image` their composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVbGroupoid {
    pub name: String,
    pub base: CoordGroupoid,
    pub side_dim: usize,
    pub fiber_dim: usize,
    pub src_lin: Mat,
    pub tgt_lin: Mat,
    pub unit_lin: Mat,
    pub inv_lin: Mat,
    pub comp: CompositionData,
}

fn probe_groupoid() -> FiniteGroupoid {
    FiniteGroupoid::pair(2)
}

impl LinearVbGroupoid {
    /// The same data placed on every arrow of a two-object pair groupoid; the finite
    /// validator and dual then apply verbatim.
    pub fn probe(&self) -> FinVBGroupoid {
        let base = probe_groupoid();
        let arrows = base.arrows();
        let comp_lin: BTreeMap<_, _> = base.composable_pairs().map(|p| (p, self.comp.clone())).collect();
        FinVBGroupoid {
            side_dims: vec![self.side_dim; base.objects()],
            fiber_dims: vec![self.fiber_dim; arrows],
            src_lin: vec![self.src_lin.clone(); arrows],
            tgt_lin: vec![self.tgt_lin.clone(); arrows],
            unit_lin: vec![self.unit_lin.clone(); base.objects()],
            inv_lin: vec![self.inv_lin.clone(); arrows],
            comp_lin,
            base,
        }
    }

    /// Reads constant data back from a probe, failing if any arrow or pair disagrees.
    fn from_probe(name: String, base: CoordGroupoid, p: &FinVBGroupoid) -> Result<Self, CoordError> {
        let same = |v: &[Mat], what: &str| -> Result<Mat, CoordError> {
            if v.windows(2).all(|w| w[0] == w[1]) {
                Ok(v[0].clone())
            } else {
                Err(CoordError::NotConstant(format!("{name}: {what}")))
            }
        };
        let mut comps = p.comp_lin.values();
        let first = comps.next().expect("composable pairs").clone();
        if comps.any(|c| *c != first) {
            return Err(CoordError::NotConstant(format!("{name}: composition")));
        }
        Ok(LinearVbGroupoid {
            side_dim: p.side_dims[0],
            fiber_dim: p.fiber_dims[0],
            src_lin: same(&p.src_lin, "source")?,
            tgt_lin: same(&p.tgt_lin, "target")?,
            unit_lin: same(&p.unit_lin, "identity")?,
            inv_lin: same(&p.inv_lin, "inverse")?,
            comp: first,
            name,
            base,
        })
    }

    /// Fibre axioms through the finite validator; the base is validated separately.
    pub fn validate_fibres(&self) -> Result<(), CoordError> {
        match self.probe().validate().failure {
            None => Ok(()),
            Some(c) => Err(CoordError::Invalid(format!("{}: {} ({})", self.name, c.check, c.detail))),
        }
    }

    /// Canonical basis of the core `ker α̃` over an identity.
    pub fn core_basis(&self) -> Mat {
        self.src_lin.kernel().canonical_basis()
    }

    pub fn core_dim(&self) -> usize {
        self.fiber_dim - self.src_lin.rank()
    }

    /// `∂ = β̃` restricted to the core, in the canonical core basis.
    pub fn core_anchor(&self) -> Mat {
        &self.tgt_lin * &self.core_basis()
    }

    /// Matrix `C` with `ηξ = C (η; ξ)` on compatible pairs.
    pub fn composition_matrix(&self) -> Mat {
        &self.comp.image * &self.comp.domain.left_inverse().expect("domain basis has independent columns")
    }

    pub fn compose(&self, eta: &[Rat], xi: &[Rat]) -> Result<Vec<Rat>, CoordError> {
        if self.src_lin.mul_vec(eta) != self.tgt_lin.mul_vec(xi) {
            return Err(CoordError::NotComposable(self.name.clone()));
        }
        Ok(self.composition_matrix().mul_vec(&vector::concat(&[eta, xi])))
    }

    /// Dual VB-groupoid `(Ω*; G, K*; M)`. Fibre coordinates are dual to those of `Ω`;
    /// side coordinates are dual to [`Self::core_basis`].
    pub fn dual(&self) -> Result<LinearVbGroupoid, CoordError> {
        let d = pradines_dual(&self.probe())?;
        LinearVbGroupoid::from_probe(format!("{}*", self.name), self.base.clone(), &d)
    }

    /// Core elements `φ̄` of the dual, `<φ̄, 1̃_X + k> = <φ, X + ∂k>`, one column per basis covector of `A*`.
    pub fn dual_core_elements(&self) -> Result<Mat, CoordError> {
        Ok(dual_core_elements(&self.probe(), 0)?)
    }

    /// New side coordinates `x' = P x`.
    pub fn reframe_side(&self, p: &Mat) -> Result<LinearVbGroupoid, CoordError> {
        let p_inv = p.inverse()?;
        Ok(LinearVbGroupoid {
            src_lin: p * &self.src_lin,
            tgt_lin: p * &self.tgt_lin,
            unit_lin: &self.unit_lin * &p_inv,
            ..self.clone()
        })
    }

    /// The groupoid `Ω ⇉ A` on total coordinates `(g, ξ)` over `(m, x)`.
    pub fn total_space(&self) -> CoordGroupoid {
        let (n, f) = (self.base.arrow_dim(), self.fiber_dim);
        let lin = |a: &Mat| PolyMap::linear(a);
        let b = &self.base;
        // ((h, η), (g, ξ)) -> (hg, C(η; ξ))
        let arrows: Vec<usize> = (0..n).chain(n + f..2 * n + f).collect();
        let fibres: Vec<usize> = (n..n + f).chain(2 * n + f..2 * n + 2 * f).collect();
        let comp = PolyMap::concat(&[
            &b.comp_map().compose(&PolyMap::projection(2 * (n + f), &arrows)).expect("dims"),
            &lin(&self.composition_matrix()).compose(&PolyMap::projection(2 * (n + f), &fibres)).expect("dims"),
        ])
        .expect("same domain");
        CoordGroupoid::new(
            self.name.clone(),
            Family::Derived(format!("total space of {}", self.name)),
            b.base_dim() + self.side_dim,
            n + f,
            PolyMap::product(&[b.src_map(), &lin(&self.src_lin)]),
            PolyMap::product(&[b.tgt_map(), &lin(&self.tgt_lin)]),
            PolyMap::product(&[b.unit_map(), &lin(&self.unit_lin)]),
            PolyMap::product(&[b.inv_map(), &lin(&self.inv_lin)]),
            comp,
        )
        .expect("source of a VB-groupoid is onto")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordmodels::{pair_groupoid, tangent_vb};
    use crate::exactcalc::Sampler;

    #[test]
    fn tangent_of_pair_total_space_validates() {
        let mut s = Sampler::new(2);
        let t = tangent_vb(&pair_groupoid(2)).unwrap();
        t.validate_fibres().unwrap();
        assert!(t.total_space().validate(&mut s).passed());
        assert_eq!(t.core_dim(), 2);
    }

    #[test]
    fn double_dual_returns_original_matrices() {
        let t = tangent_vb(&pair_groupoid(1)).unwrap();
        let dd = t.dual().unwrap().dual().unwrap();
        assert_eq!((dd.fiber_dim, dd.side_dim), (t.fiber_dim, t.side_dim));
        assert_eq!(dd.inv_lin, t.inv_lin);
    }

    #[test]
    fn reframing_keeps_axioms() {
        let t = tangent_vb(&pair_groupoid(2)).unwrap();
        let r = t.reframe_side(&Mat::from_ints(&[&[1, 2], &[0, 1]])).unwrap();
        r.validate_fibres().unwrap();
    }
}
