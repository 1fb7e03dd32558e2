use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use treelaws::discretesnake::{assign_labels, sample_plane_tree, stats, LabeledTree};
use treelaws::exactlaws as ex;
use treelaws::series::{format_rational, parse_rational, QuadExt};
use treelaws::RngStream;

fn q() -> impl Strategy<Value = BigRational> {
    (-1000i64..1000, 1i64..200).prop_map(|(p, d)| BigRational::new(p.into(), d.into()))
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (q(), q()).prop_map(|(a, b)| QuadExt::new(a, b))
}

proptest! {
    #[test]
    fn quadext_ring_laws(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert_eq!(&x + &(-&x), QuadExt::zero());
    }

    #[test]
    fn quadext_inverse_and_norm(x in quad(), y in quad()) {
        prop_assume!(!x.is_zero());
        let inv = x.inv().unwrap();
        prop_assert_eq!(&x * &inv, QuadExt::one());
        // the norm is multiplicative and equals x times its conjugate
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!(&x * &x.conj(), QuadExt::rational(x.norm()));
    }

    #[test]
    fn quadext_string_round_trip(x in quad()) {
        let back: QuadExt = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn rational_string_round_trip(x in q()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn quadext_float_image_is_a_homomorphism(x in quad(), y in quad()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        let prod = (&x * &y).to_f64();
        prop_assert!((prod - fx * fy).abs() <= 1e-9 * (1.0 + (fx * fy).abs()));
    }

    #[test]
    fn triple_root_solves_h(l in 0.01f64..20.0, m1 in 0.0f64..20.0, m2 in 0.0f64..20.0) {
        let r = ex::solve_triple(ex::RatePoint::new(l, m1, m2).unwrap()).unwrap();
        let target = 6f64.sqrt() * l;
        let h = ex::h_mu(r.value, m1, m2).unwrap();
        prop_assert!((h - target).abs() <= 1e-11 * target.max(1.0));
        prop_assert!(r.value > 0.0);
    }

    #[test]
    fn triple_is_monotone_in_each_rate(
        l in 0.01f64..10.0, m1 in 0.0f64..10.0, m2 in 0.0f64..10.0, d in 0.01f64..2.0
    ) {
        let v = |l, a, b| ex::solve_triple(ex::RatePoint::new(l, a, b).unwrap()).unwrap().value;
        let base = v(l, m1, m2);
        prop_assert!(v(l + d, m1, m2) > base);
        prop_assert!(v(l, m1 + d, m2) > base);
        prop_assert!(v(l, m1, m2 + d) > base);
        // swapping the two sides is a symmetry of the snake
        prop_assert!((v(l, m1, m2) - v(l, m2, m1)).abs() <= 1e-12 * base);
    }

    #[test]
    fn negating_labels_swaps_signs(n in 1usize..200, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let tree = sample_plane_tree(n, &mut rng).unwrap();
        let lt = assign_labels(tree, &mut rng);
        prop_assert!(lt.is_valid());
        let neg: LabeledTree = lt.negated();
        prop_assert!(neg.is_valid());
        let (s, t) = (stats(&lt), stats(&neg));
        prop_assert_eq!(s.zero_count, t.zero_count);
        prop_assert_eq!(s.pos_count, t.neg_count);
        prop_assert_eq!(s.neg_count, t.pos_count);
        prop_assert_eq!(s.zero_count + s.pos_count + s.neg_count, n + 1);
    }

    #[test]
    fn sampled_trees_round_trip_through_dyck(n in 1usize..300, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 1);
        let t = sample_plane_tree(n, &mut rng).unwrap();
        prop_assert_eq!(t.n_edges(), n);
        let steps = t.to_dyck();
        prop_assert_eq!(steps.len(), 2 * n);
        let mut h = 0i64;
        for &up in &steps {
            h += if up { 1 } else { -1 };
            prop_assert!(h >= 0);
        }
        prop_assert_eq!(h, 0);
    }
}
