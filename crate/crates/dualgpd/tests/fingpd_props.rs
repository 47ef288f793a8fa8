use dualgpd::exactcalc::{Mat, Sampler};
use dualgpd::fingpd::{
    dual_of_morphism, pradines_dual, random_split_model, split_vbgroupoid, FinVBGroupoid, FiniteGroupoid, VbMorphism,
};
use proptest::prelude::*;

/// Morphism of split models induced by `(f_A, f_K)`, with target `∂' = f_A ∂ f_K⁻¹`.
fn induced(omega: &FinVBGroupoid, delta: &Mat, fa: &Mat, fk: &Mat) -> (FinVBGroupoid, VbMorphism) {
    let target_delta = &(fa * delta) * &fk.inverse().unwrap();
    let target = split_vbgroupoid(&omega.base, fa.rows(), fk.rows(), &target_delta).unwrap();
    let block = Mat::block_diag(&[fa, fk]);
    let f = VbMorphism { fiber: vec![block; omega.base.arrows()], side: vec![fa.clone(); omega.base.objects()] };
    (target, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_is_a_vb_groupoid(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let omega = random_split_model(&mut s, 4, 3);
        let dual = pradines_dual(&omega).unwrap();
        prop_assert!(dual.validate().passed());
        let core = dual.core();
        for m in 0..omega.base.objects() {
            prop_assert_eq!(core.dim(m), omega.side_dims[m]);
        }
    }

    #[test]
    fn dualization_is_contravariant(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let base = FiniteGroupoid::pair(1 + s.index(3));
        let (a, k) = (1 + s.index(2), 1 + s.index(2));
        let delta = s.matrix(a, k);
        let omega = split_vbgroupoid(&base, a, k, &delta).unwrap();
        let (fa, fk) = (s.matrix(a, a), s.invertible(k));
        let (mid, f1) = induced(&omega, &delta, &fa, &fk);
        let mid_delta = &(&fa * &delta) * &fk.inverse().unwrap();
        let (ga, gk) = (s.matrix(a, a), s.invertible(k));
        let (last, f2) = induced(&mid, &mid_delta, &ga, &gk);
        let composite = f2.after(&f1);
        let lhs = dual_of_morphism(&omega, &last, &composite).unwrap();
        let rhs = dual_of_morphism(&omega, &mid, &f1).unwrap().after(&dual_of_morphism(&mid, &last, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let omega = random_split_model(&mut s, 3, 2);
        prop_assert_eq!(FinVBGroupoid::from_json(&omega.to_json()).unwrap(), omega);
    }
}

#[test]
fn corrupted_json_is_rejected() {
    let omega = split_vbgroupoid(&FiniteGroupoid::pair(2), 1, 1, &Mat::identity(1)).unwrap();
    let text = omega.to_json().replacen("\"1/1\"", "\"2/1\"", 1);
    assert!(FinVBGroupoid::from_json(&text).is_err());
}
