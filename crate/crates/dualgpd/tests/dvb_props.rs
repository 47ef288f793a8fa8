use dualgpd::dvb::{
    double_dual_iso, pair_duals_closed, pair_duals_via, pairing_matrix, DvbDims, DvbElement, Sign, SplitDvb,
};
use dualgpd::exactcalc::Sampler;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = DvbDims> {
    (0usize..=4, 0usize..=4, 0usize..=4).prop_map(|(h, v, k)| DvbDims::new(h, v, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn interchange_law(d in dims(), seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let (a1, a2, b1, b2) = (s.vector(d.side_h), s.vector(d.side_h), s.vector(d.side_v), s.vector(d.side_v));
        let mut el = |a: &Vec<_>, b: &Vec<_>| DvbElement { a: a.clone(), b: b.clone(), k: s.vector(d.core) };
        let (e1, e2, e3, e4) = (el(&a1, &b1), el(&a1, &b2), el(&a2, &b1), el(&a2, &b2));
        let lhs = e1.add_vertical(&e2).unwrap().add_horizontal(&e3.add_vertical(&e4).unwrap()).unwrap();
        let rhs = e1.add_horizontal(&e3).unwrap().add_vertical(&e2.add_horizontal(&e4).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn duality_pairing(d in dims().prop_filter("at most 3", |d| d.side_h <= 3 && d.side_v <= 3 && d.core <= 3),
                       seed in any::<u64>()) {
        let e = SplitDvb::new(d, "E");
        let mut s = Sampler::new(seed);
        let phi = e.random_dual_v(&mut s);
        let mut psi = e.random_dual_h(&mut s);
        psi.kappa = phi.kappa.clone();
        let closed = pair_duals_closed(&phi, &psi).unwrap();
        for _ in 0..3 {
            prop_assert_eq!(pair_duals_via(&phi, &psi, &s.vector(d.core)).unwrap(), closed.clone());
        }
        let m = pairing_matrix(&e, &phi.kappa).unwrap();
        prop_assert_eq!(m.rank(), d.side_h + d.side_v);
        let r = double_dual_iso(&e, &mut s, 3).unwrap();
        prop_assert_eq!((r.side_k_sign, r.side_h_sign), (Sign::Plus, Sign::Plus));
        if d.side_v > 0 {
            prop_assert_eq!(r.core_sign, Sign::Minus);
        }
    }
}
