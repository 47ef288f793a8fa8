//! VB-groupoids over finite groupoids, their cores, and the dual VB-groupoid.

mod dual;
mod groupoid;
mod vbgpd;

pub use dual::{
    core_map, double_dual_identify, dual_composition_values, dual_core_elements, dual_of_morphism, pradines_dual,
    validate_morphism, DoubleDual, VbMorphism,
};
pub use groupoid::FiniteGroupoid;
pub use vbgpd::{split_vbgroupoid, CompositionData, CoreBundle, Counterexample, FinVBGroupoid, Location, ValidationReport};

use thiserror::Error;

/// Serializes maps keyed by arrow pairs as lists of `[h, g, value]`, since JSON keys must be strings.
pub(crate) mod pair_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<V: Serialize, S: Serializer>(map: &BTreeMap<(usize, usize), V>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(&(h, g), v)| (h, g, v)))
    }

    pub fn deserialize<'de, V: Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), V>, D::Error> {
        let entries: Vec<(usize, usize, V)> = Vec::deserialize(d)?;
        Ok(entries.into_iter().map(|(h, g, v)| ((h, g), v)).collect())
    }
}

use crate::exactcalc::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingpdError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("arrows {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("VB-groupoid fails {} at {:?}: {}", .0.check, .0.at, .0.detail)]
    Invalid(Counterexample),
    #[error("identities and core do not span the fibre over the identity at {0}")]
    SplittingSingular(usize),
    #[error("dual composition on ({h}, {g}) depends on the decomposition")]
    NotWellDefined { h: usize, g: usize },
    #[error("not a morphism: {} at {:?}: {}", .0.check, .0.at, .0.detail)]
    NotMorphism(Counterexample),
    #[error("double dual identification fails: {0}")]
    Identification(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl FinVBGroupoid {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Parses and re-validates, so a decoded value always satisfies the groupoid laws.
    pub fn from_json(text: &str) -> Result<Self, FingpdError> {
        let omega: FinVBGroupoid = serde_json::from_str(text).map_err(|e| FingpdError::Json(e.to_string()))?;
        let base = &omega.base;
        let rebuilt = FiniteGroupoid::new(
            base.objects(),
            (0..base.arrows()).map(|g| base.src(g)).collect(),
            (0..base.arrows()).map(|g| base.tgt(g)).collect(),
            (0..base.objects()).map(|m| base.unit(m)).collect(),
            (0..base.arrows()).map(|g| base.inv(g)).collect(),
            |h, g| base.compose(h, g).unwrap_or(usize::MAX),
        )?;
        if rebuilt != *base {
            return Err(FingpdError::InvalidGroupoid("composition table is incomplete".into()));
        }
        match omega.validate().failure {
            Some(c) => Err(FingpdError::Invalid(c)),
            None => Ok(omega),
        }
    }
}

/// Random split model over one of the small groupoids, with fibre dimensions at most `max_dim`.
pub fn random_split_model(s: &mut crate::exactcalc::Sampler, max_objects: usize, max_dim: usize) -> FinVBGroupoid {
    let base = match s.index(4) {
        0 => FiniteGroupoid::pair(1 + s.index(max_objects)),
        1 => FiniteGroupoid::trivial(1 + s.index(max_objects)),
        2 => FiniteGroupoid::cyclic(1 + s.index(3)),
        _ => FiniteGroupoid::product(&FiniteGroupoid::pair(1 + s.index(max_objects.max(2) / 2)), &FiniteGroupoid::cyclic(2)),
    };
    let a = s.index(max_dim + 1);
    let k = s.index(max_dim + 1);
    let delta = s.matrix(a, k);
    split_vbgroupoid(&base, a, k, &delta).expect("split model")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcalc::{Mat, Sampler};

    /// Dual of the split model written out by hand in coordinates `(φ, θ) ∈ A* ⊕ K*`:
    /// `α̃(φ,θ) = θ - ∂ᵀφ`, `β̃(φ,θ) = θ`, `1̃_θ = (0, θ)`, `(φ,θ)⁻¹ = (-φ, θ - ∂ᵀφ)`,
    /// `(φ',θ')(φ,θ) = (φ + φ', θ')`.
    #[test]
    fn split_dual_matches_hand_dualization() {
        let mut s = Sampler::new(17);
        let (a, k) = (2, 3);
        let delta = s.matrix(a, k);
        let dt = delta.transpose();
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(3), a, k, &delta).unwrap();
        let dual = pradines_dual(&omega).unwrap();
        let (ia, ik) = (Mat::identity(a), Mat::identity(k));
        let src = Mat::hstack(&[&-&dt, &ik]);
        let tgt = Mat::hstack(&[&Mat::zeros(k, a), &ik]);
        let unit = Mat::vstack(&[&Mat::zeros(a, k), &ik]);
        let inv = Mat::vstack(&[&Mat::hstack(&[&-&ia, &Mat::zeros(a, k)]), &Mat::hstack(&[&-&dt, &ik])]);
        for g in 0..9 {
            assert_eq!(dual.src_lin[g], src);
            assert_eq!(dual.tgt_lin[g], tgt);
            assert_eq!(dual.inv_lin[g], inv);
        }
        assert!(dual.unit_lin.iter().all(|u| *u == unit));
        for (&(h, g), c) in &dual.comp_lin {
            for (pair, prod) in c.domain.columns().iter().zip(c.image.columns()) {
                let (psi, phi) = (&pair[..a + k], &pair[a + k..]);
                let mut expected = crate::exactcalc::vector::add(&psi[..a], &phi[..a]);
                expected.extend_from_slice(&psi[a..]);
                assert_eq!(prod, expected, "pair ({h}, {g})");
            }
        }
    }

    #[test]
    fn trivial_groupoid_dual_swaps_side_and_core() {
        let omega = split_vbgroupoid(&FiniteGroupoid::trivial(2), 2, 1, &Mat::from_ints(&[&[1], &[2]])).unwrap();
        let dual = pradines_dual(&omega).unwrap();
        assert_eq!(dual.side_dims, vec![1, 1]);
        assert_eq!(dual.core().basis.iter().map(Mat::cols).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(dual.fiber_dims, vec![3, 3]);
    }

    #[test]
    fn double_dual_for_identity_delta() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 1, 1, &Mat::identity(1)).unwrap();
        let dd = double_dual_identify(&omega).unwrap();
        assert!(dd.side.iter().all(|s| *s == Mat::identity(1)));
    }

    #[test]
    fn double_dual_for_zero_delta() {
        let omega = split_vbgroupoid(&FiniteGroupoid::cyclic(3), 2, 2, &Mat::zeros(2, 2)).unwrap();
        let dd = double_dual_identify(&omega).unwrap();
        let d = &dd.double_dual;
        assert_eq!((&d.src_lin, &d.tgt_lin, &d.unit_lin, &d.inv_lin), (&omega.src_lin, &omega.tgt_lin, &omega.unit_lin, &omega.inv_lin));
    }

    #[test]
    fn decompositions_agree() {
        let mut s = Sampler::new(5);
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 2, 2, &s.matrix(2, 2)).unwrap();
        let dual = pradines_dual(&omega).unwrap();
        let c = dual.composition(1, 2).unwrap();
        let pair = c.domain.mul_vec(&s.vector(c.domain.cols()));
        let zeta = s.vector(4);
        let values = dual_composition_values(&omega, 1, 2, &pair[..4], &pair[4..], &zeta, &mut s, 3).unwrap();
        assert!(values.len() >= 5);
        assert!(values.windows(2).all(|w| w[0] == w[1]));
        let composite = dual.compose(1, 2, &pair[..4], &pair[4..]).unwrap();
        assert_eq!(crate::exactcalc::vector::dot(&composite, &zeta), values[0]);
    }

    #[test]
    fn dual_of_identity_and_scalar_morphisms() {
        let mut s = Sampler::new(8);
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 2, 1, &s.matrix(2, 1)).unwrap();
        let id = VbMorphism::identity(&omega);
        let dual_id = dual_of_morphism(&omega, &omega, &id).unwrap();
        let dual = pradines_dual(&omega).unwrap();
        assert_eq!(dual_id, VbMorphism::identity(&dual));
        let three = crate::exactcalc::int(3);
        let dual_three = dual_of_morphism(&omega, &omega, &id.scaled(&three)).unwrap();
        assert_eq!(dual_three, VbMorphism::identity(&dual).scaled(&three));
    }

    #[test]
    fn non_morphism_is_rejected() {
        let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 1, 1, &Mat::identity(1)).unwrap();
        let mut f = VbMorphism::identity(&omega);
        f.side[0] = Mat::from_ints(&[&[2]]);
        assert!(matches!(dual_of_morphism(&omega, &omega, &f), Err(FingpdError::NotMorphism(_))));
    }
}
