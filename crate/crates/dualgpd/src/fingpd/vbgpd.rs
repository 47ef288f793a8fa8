use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FiniteGroupoid, FingpdError};
use crate::exactcalc::{vector, ExactError, Mat, Rat, Sampler};

/// Composition on one composable pair `(h, g)`: `domain` holds a basis (as columns) of the
/// compatible subspace of `Ω_h ⊕ Ω_g`, `image` the corresponding composites in `Ω_hg`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionData {
    pub domain: Mat,
    pub image: Mat,
}

/// A vector bundle over the arrows of a finite groupoid with a linear groupoid structure
/// over a vector bundle on its objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinVBGroupoid {
    pub base: FiniteGroupoid,
    pub side_dims: Vec<usize>,
    pub fiber_dims: Vec<usize>,
    pub src_lin: Vec<Mat>,
    pub tgt_lin: Vec<Mat>,
    pub unit_lin: Vec<Mat>,
    pub inv_lin: Vec<Mat>,
    #[serde(with = "super::pair_keys")]
    pub comp_lin: BTreeMap<(usize, usize), CompositionData>,
}

/// Where a validation check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    Arrow(usize),
    Object(usize),
    Pair(usize, usize),
    Triple(usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: &'static str,
    pub at: Location,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks_run: usize,
    pub failure: Option<Counterexample>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Per-object core: `basis` spans `ker α̃` on `Ω_{1_m}`, `delta` is `β̃` in that basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreBundle {
    pub basis: Vec<Mat>,
    pub delta: Vec<Mat>,
}

impl CoreBundle {
    pub fn dim(&self, m: usize) -> usize {
        self.basis[m].cols()
    }
}

impl FinVBGroupoid {
    pub fn composition(&self, h: usize, g: usize) -> Result<&CompositionData, FingpdError> {
        self.comp_lin.get(&(h, g)).ok_or(FingpdError::NotComposable(h, g))
    }

    /// `ηξ` for a compatible pair; errors if the pair is not compatible.
    pub fn compose(&self, h: usize, g: usize, eta: &[Rat], xi: &[Rat]) -> Result<Vec<Rat>, FingpdError> {
        let c = self.composition(h, g)?;
        let coords = c.domain.coords(&vector::concat(&[eta, xi]))?;
        Ok(c.image.mul_vec(&coords))
    }

    pub fn src_of(&self, g: usize, xi: &[Rat]) -> Vec<Rat> {
        self.src_lin[g].mul_vec(xi)
    }

    pub fn tgt_of(&self, g: usize, xi: &[Rat]) -> Vec<Rat> {
        self.tgt_lin[g].mul_vec(xi)
    }

    pub fn zero(&self, g: usize) -> Vec<Rat> {
        vector::zeros(self.fiber_dims[g])
    }

    pub fn random_element(&self, g: usize, s: &mut Sampler) -> Vec<Rat> {
        s.vector(self.fiber_dims[g])
    }

    /// Core bases, chosen canonically so that equal subspaces give equal coordinates.
    pub fn core(&self) -> CoreBundle {
        let g = &self.base;
        let basis: Vec<Mat> = (0..g.objects()).map(|m| self.src_lin[g.unit(m)].kernel().canonical_basis()).collect();
        let delta = (0..g.objects()).map(|m| &self.tgt_lin[g.unit(m)] * &basis[m]).collect();
        CoreBundle { basis, delta }
    }

    /// Checks linear shapes, every groupoid law fibrewise, and surjectivity of the double source map.
    /// Local checks on each composable pair run before the checks that chain compositions.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = 0;
        let failure = self.first_failure(&mut checks);
        ValidationReport { checks_run: checks, failure }
    }

    fn first_failure(&self, checks: &mut usize) -> Option<Counterexample> {
        let g = &self.base;
        macro_rules! require {
            ($cond:expr, $name:expr, $at:expr, $($fmt:tt)*) => {{
                *checks += 1;
                if !$cond {
                    return Some(Counterexample { check: $name, at: $at, detail: format!($($fmt)*) });
                }
            }};
        }
        let n = g.arrows();
        require!(
            self.fiber_dims.len() == n && self.src_lin.len() == n && self.tgt_lin.len() == n && self.inv_lin.len() == n,
            "shapes", Location::Arrow(0), "per-arrow tables have the wrong length"
        );
        require!(
            self.side_dims.len() == g.objects() && self.unit_lin.len() == g.objects(),
            "shapes", Location::Object(0), "per-object tables have the wrong length"
        );
        for a in 0..n {
            let f = self.fiber_dims[a];
            let (s, t) = (g.src(a), g.tgt(a));
            let shape = |m: &Mat, r: usize, c: usize| m.rows() == r && m.cols() == c;
            require!(shape(&self.src_lin[a], self.side_dims[s], f), "shapes", Location::Arrow(a), "source matrix");
            require!(shape(&self.tgt_lin[a], self.side_dims[t], f), "shapes", Location::Arrow(a), "target matrix");
            require!(shape(&self.inv_lin[a], self.fiber_dims[g.inv(a)], f), "shapes", Location::Arrow(a), "inverse matrix");
            require!(
                self.src_lin[a].rank() == self.side_dims[s],
                "double source surjective", Location::Arrow(a),
                "source has rank {} onto dimension {}", self.src_lin[a].rank(), self.side_dims[s]
            );
        }
        for m in 0..g.objects() {
            let u = &self.unit_lin[m];
            let one = g.unit(m);
            require!(u.rows() == self.fiber_dims[one] && u.cols() == self.side_dims[m], "shapes", Location::Object(m), "unit matrix");
            let id = Mat::identity(self.side_dims[m]);
            require!(&self.src_lin[one] * u == id, "unit source", Location::Object(m), "α̃ ∘ 1̃ ≠ id");
            require!(&self.tgt_lin[one] * u == id, "unit target", Location::Object(m), "β̃ ∘ 1̃ ≠ id");
        }
        for (h, k) in g.composable_pairs() {
            let at = Location::Pair(h, k);
            *checks += 1;
            let Some(c) = self.comp_lin.get(&(h, k)) else {
                return Some(Counterexample { check: "composition defined", at, detail: "no composition data".into() });
            };
            let (fh, fk, fhk) = (self.fiber_dims[h], self.fiber_dims[k], self.fiber_dims[g.compose(h, k).unwrap()]);
            require!(
                c.domain.rows() == fh + fk && c.image.rows() == fhk && c.image.cols() == c.domain.cols(),
                "shapes", at.clone(), "composition matrices"
            );
            let compat = Mat::hstack(&[&self.src_lin[h], &-&self.tgt_lin[k]]);
            let expected = compat.kernel().cols();
            require!(
                (&compat * &c.domain).is_zero() && c.domain.rank() == c.domain.cols() && c.domain.cols() == expected,
                "compatible pairs", at.clone(), "domain is not a basis of the compatible subspace (dimension {expected})"
            );
            let hk = g.compose(h, k).unwrap();
            let eta_part = c.domain.select_rows(&(0..fh).collect::<Vec<_>>());
            let xi_part = c.domain.select_rows(&(fh..fh + fk).collect::<Vec<_>>());
            require!(
                &self.src_lin[hk] * &c.image == &self.src_lin[k] * &xi_part,
                "composite source", at.clone(), "α̃(ηξ) ≠ α̃(ξ)"
            );
            require!(
                &self.tgt_lin[hk] * &c.image == &self.tgt_lin[h] * &eta_part,
                "composite target", at.clone(), "β̃(ηξ) ≠ β̃(η)"
            );
        }
        // Composition as a matrix on Ω_h ⊕ Ω_g, valid on compatible pairs.
        let mut comp_mat = BTreeMap::new();
        for (&pair, c) in &self.comp_lin {
            match c.domain.left_inverse() {
                Ok(l) => comp_mat.insert(pair, &c.image * &l),
                Err(_) => return Some(Counterexample { check: "compatible pairs", at: Location::Pair(pair.0, pair.1), detail: "domain is degenerate".into() }),
            };
        }
        let compatible = |h: usize, k: usize, m: &Mat| (&Mat::hstack(&[&self.src_lin[h], &-&self.tgt_lin[k]]) * m).is_zero();
        for a in 0..n {
            let at = Location::Arrow(a);
            let (s, t, ia) = (g.src(a), g.tgt(a), g.inv(a));
            let (ut, us) = (g.unit(t), g.unit(s));
            let id = Mat::identity(self.fiber_dims[a]);
            let left_unit = &self.unit_lin[t] * &self.tgt_lin[a];
            let right_unit = &self.unit_lin[s] * &self.src_lin[a];
            let pairs = Mat::vstack(&[&left_unit, &id]);
            require!(compatible(ut, a, &pairs) && &comp_mat[&(ut, a)] * &pairs == id, "left identity", at.clone(), "1̃ ξ ≠ ξ");
            let pairs = Mat::vstack(&[&id, &right_unit]);
            require!(compatible(a, us, &pairs) && &comp_mat[&(a, us)] * &pairs == id, "right identity", at.clone(), "ξ 1̃ ≠ ξ");
            let pairs = Mat::vstack(&[&self.inv_lin[a], &id]);
            require!(compatible(ia, a, &pairs) && &comp_mat[&(ia, a)] * &pairs == right_unit, "left inverse", at.clone(), "ξ⁻¹ξ ≠ 1̃");
            let pairs = Mat::vstack(&[&id, &self.inv_lin[a]]);
            require!(compatible(a, ia, &pairs) && &comp_mat[&(a, ia)] * &pairs == left_unit, "right inverse", at.clone(), "ξξ⁻¹ ≠ 1̃");
        }
        for (k3, h, k1) in g.composable_triples() {
            let at = Location::Triple(k3, h, k1);
            let (f3, f2, f1) = (self.fiber_dims[k3], self.fiber_dims[h], self.fiber_dims[k1]);
            let z = |r: usize, c: usize| Mat::zeros(r, c);
            let system = Mat::vstack(&[
                &Mat::hstack(&[&self.src_lin[k3], &-&self.tgt_lin[h], &z(self.side_dims[g.src(k3)], f1)]),
                &Mat::hstack(&[&z(self.side_dims[g.src(h)], f3), &self.src_lin[h], &-&self.tgt_lin[k1]]),
            ]);
            let v = system.kernel();
            let rows = |r: std::ops::Range<usize>| v.select_rows(&r.collect::<Vec<_>>());
            let (zeta, eta, xi) = (rows(0..f3), rows(f3..f3 + f2), rows(f3 + f2..f3 + f2 + f1));
            let (k3h, hk1) = (g.compose(k3, h).unwrap(), g.compose(h, k1).unwrap());
            let left = &comp_mat[&(k3h, k1)] * &Mat::vstack(&[&(&comp_mat[&(k3, h)] * &Mat::vstack(&[&zeta, &eta])), &xi]);
            let right = &comp_mat[&(k3, hk1)] * &Mat::vstack(&[&zeta, &(&comp_mat[&(h, k1)] * &Mat::vstack(&[&eta, &xi]))]);
            require!(left == right, "associativity", at.clone(), "(ζη)ξ ≠ ζ(ηξ) on the compatible triples");
        }
        None
    }
}

/// The model `Ω_g = A ⊕ K` with `α̃(a,k) = a`, `β̃(a,k) = a + ∂k`, and
/// `(a', k')(a, k) = (a, k + k')` whenever `a' = a + ∂k`.
pub fn split_vbgroupoid(base: &FiniteGroupoid, dim_a: usize, dim_k: usize, delta: &Mat) -> Result<FinVBGroupoid, FingpdError> {
    if delta.rows() != dim_a || delta.cols() != dim_k {
        return Err(ExactError::DimensionMismatch { expected: dim_a * dim_k, got: delta.rows() * delta.cols() }.into());
    }
    let f = dim_a + dim_k;
    let id_a = Mat::identity(dim_a);
    let id_k = Mat::identity(dim_k);
    let za = Mat::zeros(dim_a, dim_k);
    let zk = Mat::zeros(dim_k, dim_a);
    let src = Mat::hstack(&[&id_a, &za]);
    let tgt = Mat::hstack(&[&id_a, delta]);
    let unit = Mat::vstack(&[&id_a, &zk]);
    let inv = Mat::vstack(&[&Mat::hstack(&[&id_a, delta]), &Mat::hstack(&[&zk, &-&id_k])]);
    // Parameters (a, k, k') -> (η, ξ) = ((a + ∂k, k'), (a, k)), composite (a, k + k').
    let zkk = Mat::zeros(dim_k, dim_k);
    let domain = Mat::vstack(&[
        &Mat::hstack(&[&id_a, delta, &za]),
        &Mat::hstack(&[&zk, &zkk, &id_k]),
        &Mat::hstack(&[&id_a, &za, &za]),
        &Mat::hstack(&[&zk, &id_k, &zkk]),
    ]);
    let image = Mat::vstack(&[&Mat::hstack(&[&id_a, &za, &za]), &Mat::hstack(&[&zk, &id_k, &id_k])]);
    let comp = CompositionData { domain, image };
    let n = base.arrows();
    Ok(FinVBGroupoid {
        base: base.clone(),
        side_dims: vec![dim_a; base.objects()],
        fiber_dims: vec![f; n],
        src_lin: vec![src; n],
        tgt_lin: vec![tgt; n],
        unit_lin: vec![unit; base.objects()],
        inv_lin: vec![inv; n],
        comp_lin: base.composable_pairs().map(|p| (p, comp.clone())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::int;

    #[test]
    fn split_model_validates() {
        let mut s = Sampler::new(1);
        for base in [FiniteGroupoid::pair(3), FiniteGroupoid::cyclic(2), FiniteGroupoid::trivial(2)] {
            let delta = s.matrix(2, 3);
            let omega = split_vbgroupoid(&base, 2, 3, &delta).unwrap();
            let report = omega.validate();
            assert!(report.passed(), "{:?}", report.failure);
        }
    }

    #[test]
    fn zero_bundle_validates() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 0, 0, &Mat::zeros(0, 0)).unwrap();
        assert!(omega.validate().passed());
    }

    #[test]
    fn zero_delta_makes_source_equal_target() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 2, 1, &Mat::zeros(2, 1)).unwrap();
        assert_eq!(omega.src_lin, omega.tgt_lin);
    }

    #[test]
    fn split_core_with_identity_delta() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 1, 1, &Mat::identity(1)).unwrap();
        let core = omega.core();
        assert!((0..2).all(|m| core.dim(m) == 1 && core.delta[m] == Mat::identity(1)));
        assert_eq!(core.basis[0], Mat::from_ints(&[&[0], &[1]]));
    }

    #[test]
    fn injective_source_on_identities_gives_zero_core() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 2, 0, &Mat::zeros(2, 0)).unwrap();
        assert!((0..2).all(|m| omega.core().dim(m) == 0));
    }

    #[test]
    fn split_inverse_composes_to_identity() {
        let delta = Mat::from_ints(&[&[2]]);
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 1, 1, &delta).unwrap();
        let g = 1; // the arrow 1 -> 0
        let xi = vec![int(3), int(5)];
        let inv = omega.inv_lin[g].mul_vec(&xi);
        assert_eq!(inv, vec![int(13), int(-5)]);
        let gi = omega.base.inv(g);
        assert_eq!(omega.compose(gi, g, &inv, &xi).unwrap(), vec![int(3), int(0)]);
    }

    #[test]
    fn corrupted_composition_is_located() {
        let mut omega = split_vbgroupoid(&FiniteGroupoid::pair(3), 1, 1, &Mat::identity(1)).unwrap();
        let pair = (5, 7);
        assert!(omega.base.compose(pair.0, pair.1).is_some());
        let c = omega.comp_lin.get_mut(&pair).unwrap();
        let v = c.image.get(0, 0) + int(1);
        c.image.set(0, 0, v);
        let failure = omega.validate().failure.unwrap();
        assert_eq!(failure.at, Location::Pair(pair.0, pair.1));
    }
}
