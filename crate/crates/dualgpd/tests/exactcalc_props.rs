use dualgpd::exactcalc::{rat, vf_bracket, Mat, Poly, PolyMap, Rat, Sampler};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Rat> {
    (-13i64..=13, 1i64..=13).prop_map(|(n, d)| rat(n, d))
}

fn field(s: &mut Sampler, n: usize, degree: u32) -> PolyMap {
    PolyMap::new(n, (0..n).map(|_| s.poly(n, degree)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, rat(0, 1));
        if a != rat(0, 1) {
            prop_assert_eq!(&a * &(rat(1, 1) / &a), rat(1, 1));
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), var in 0usize..3) {
        let mut s = Sampler::new(seed);
        let (p, q) = (s.poly(3, 3), s.poly(3, 3));
        let lhs = (&p * &q).diff(var).unwrap();
        let rhs = &(&p.diff(var).unwrap() * &q) + &(&p * &q.diff(var).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solve_returns_solution_and_kernel(seed in any::<u64>(), rows in 0usize..5, cols in 0usize..5) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(rows, cols);
        let x = s.vector(cols);
        let b = a.mul_vec(&x);
        let sol = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul_vec(&sol.particular), b);
        prop_assert_eq!(sol.kernel.len(), cols - a.rank());
        for k in &sol.kernel {
            prop_assert!(a.mul_vec(k).iter().all(|v| *v == rat(0, 1)));
        }
    }

    #[test]
    fn bracket_satisfies_jacobi(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let (x, y, z) = (field(&mut s, 2, 2), field(&mut s, 2, 2), field(&mut s, 2, 2));
        let t1 = vf_bracket(&x, &vf_bracket(&y, &z).unwrap()).unwrap();
        let t2 = vf_bracket(&y, &vf_bracket(&z, &x).unwrap()).unwrap();
        let t3 = vf_bracket(&z, &vf_bracket(&x, &y).unwrap()).unwrap();
        for i in 0..2 {
            let sum = &(&t1.components()[i] + &t2.components()[i]) + &t3.components()[i];
            prop_assert!(sum.is_zero());
        }
        prop_assert!(vf_bracket(&x, &x).unwrap().components().iter().all(Poly::is_zero));
    }

    #[test]
    fn tangent_lift_is_functorial(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = PolyMap::new(2, vec![s.poly(2, 2), s.poly(2, 2), s.poly(2, 1)]).unwrap();
        let g = PolyMap::new(3, vec![s.poly(3, 2), s.poly(3, 2)]).unwrap();
        let lhs = g.compose(&f).unwrap().tangent_lift();
        let rhs = g.tangent_lift().compose(&f.tangent_lift()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..5) {
        let mut s = Sampler::new(seed);
        let a = s.invertible(n);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, Mat::identity(n));
        prop_assert_eq!(&inv * &a, Mat::identity(n));
    }
}
