use num_traits::Zero;
use ordermotion::geometry::{orient, subset_det};
use ordermotion::motion::plan_even_d;
use ordermotion::scalar::{int, ratio};
use ordermotion::{
    build_pencil, hamming, linear_cost, mirror, order_type, robust_radius, sign_change_count, sturm_distinct_roots,
    Interval, PointTuple, RationalPolynomial, Scalar,
};
use proptest::prelude::*;

fn tuple_strategy(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PointTuple> {
    prop::collection::vec(prop::collection::vec(-30i64..=30, d), n)
        .prop_map(move |pts| {
            let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
            PointTuple::from_ints(d, &refs).unwrap()
        })
        .prop_filter("general position", ordermotion::is_general_position)
}

fn pair_strategy(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (PointTuple, PointTuple)> {
    n.prop_flat_map(move |n| (tuple_strategy(d, n..=n), tuple_strategy(d, n..=n)))
}

fn poly_strategy() -> impl Strategy<Value = RationalPolynomial> {
    prop::collection::vec(-6i64..=6, 1..=6)
        .prop_map(|c| RationalPolynomial::from_ints(&c))
        .prop_filter("nonzero at the origin", |p| !p.coeff(0).is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn swapping_two_points_negates_orientation(p in tuple_strategy(2, 3..=3), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let mut idx = vec![0, 1, 2];
        idx.swap(i, j);
        let a = orient(&p.select(&[0, 1, 2])).unwrap();
        let b = orient(&p.select(&idx)).unwrap();
        prop_assert_eq!(a, -b);
    }

    #[test]
    fn order_type_invariant_under_translation_and_positive_scaling(
        p in tuple_strategy(3, 4..=6),
        shift in prop::collection::vec(-50i64..=50, 3),
        scale in prop::collection::vec(1i64..=9, 3),
    ) {
        let moved = p
            .translated(&shift.iter().map(|&v| int(v)).collect::<Vec<_>>())
            .map_coords(|_, k, c| c * ratio(scale[k], 7));
        prop_assert_eq!(order_type(&p).unwrap(), order_type(&moved).unwrap());
    }

    #[test]
    fn mirror_is_an_involution_that_negates(p in tuple_strategy(2, 3..=6)) {
        prop_assert_eq!(mirror(&mirror(&p)), p.clone());
        prop_assert_eq!(order_type(&mirror(&p)).unwrap(), order_type(&p).unwrap().negate());
    }

    #[test]
    fn linear_cost_parity_and_hamming((p, q) in pair_strategy(2, 3..=6)) {
        let plan = linear_cost(&p, &q).unwrap();
        let (op, oq) = (order_type(&p).unwrap(), order_type(&q).unwrap());
        for (k, s) in p.subsets().enumerate() {
            prop_assert_eq!(plan.ledger[k] % 2 == 1, op.get(&s) != oq.get(&s));
            prop_assert!(plan.ledger[k] <= 2);
        }
        prop_assert!(plan.total >= hamming(&op, &oq).unwrap() as u64);
    }

    #[test]
    fn even_planner_bounds((p, q) in pair_strategy(2, 3..=6)) {
        let direct = linear_cost(&p, &q).unwrap().total;
        let flipped = linear_cost(&p, &q.negated()).unwrap().total;
        let c = p.subset_count();
        prop_assert!(direct + flipped <= 2 * c);
        let plan = plan_even_d(&p, &q).unwrap();
        prop_assert_eq!(plan.total, direct.min(flipped));
        prop_assert!(plan.meets_half_bound());
    }

    #[test]
    fn pencil_degree_and_reflection(
        (p, q) in pair_strategy(3, 4..=4),
        lambda in prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 3),
    ) {
        let lam: Vec<Scalar> = lambda.iter().map(|&v| int(v)).collect();
        let neg: Vec<Scalar> = lam.iter().map(|v| -v).collect();
        let (ps, qs) = (p.select(&[0, 1, 2, 3]), q.select(&[0, 1, 2, 3]));
        let f = build_pencil(&ps, &qs, &lam).unwrap();
        let g = build_pencil(&ps, &qs, &neg).unwrap();
        prop_assert!(f.poly.degree().unwrap_or(0) <= 3);
        prop_assert_eq!(f.poly.reflect(), g.poly);
        prop_assert_eq!(f.poly.coeff(0), subset_det(&p, &[0, 1, 2, 3]));
    }

    #[test]
    fn sturm_counts_are_additive(f in poly_strategy(), a in -8i64..=0, c in 1i64..=3, b in 4i64..=8) {
        let (a, c, b) = (ratio(2 * a - 1, 2), ratio(2 * c - 1, 2), ratio(2 * b - 1, 2));
        prop_assume!(!f.eval(&c).is_zero());
        let whole = sturm_distinct_roots(&f, &Interval::open(a.clone(), b.clone())).unwrap();
        let left = sturm_distinct_roots(&f, &Interval::open(a, c.clone())).unwrap();
        let right = sturm_distinct_roots(&f, &Interval::open(c, b)).unwrap();
        prop_assert_eq!(whole, left + right);
    }

    #[test]
    fn sign_changes_never_exceed_roots(f in poly_strategy()) {
        let axis = Interval::positive_axis();
        let changes = sign_change_count(&f, &axis).unwrap();
        let roots = sturm_distinct_roots(&f, &axis).unwrap();
        prop_assert!(changes <= roots);
        let squared = &f * &f;
        prop_assert_eq!(sign_change_count(&squared, &axis).unwrap(), 0);
        prop_assert_eq!(sturm_distinct_roots(&squared, &axis).unwrap(), roots);
    }

    #[test]
    fn robust_radius_protects_order_type(
        p in tuple_strategy(2, 3..=6),
        offsets in prop::collection::vec(prop::collection::vec(-1000i64..=1000, 2), 6),
    ) {
        let eps = robust_radius(&p).unwrap().epsilon;
        let moved = p.map_coords(|i, k, c| c + &eps * ratio(offsets[i][k], 1000));
        prop_assert_eq!(order_type(&moved).unwrap(), order_type(&p).unwrap());
    }
}
