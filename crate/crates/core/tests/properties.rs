//! Property tests for the ordered-space and norm invariants.

use std::sync::Arc;

use domcon::norm::{operator_norm_1, power, separation_sequence};
use domcon::operator::{dominates, Operator};
use domcon::{Scalar, Space, Vec1};
use proptest::prelude::*;

fn scalar() -> BoxedStrategy<Scalar> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| Scalar::ratio(n, d)).boxed()
}

fn nonneg() -> BoxedStrategy<Scalar> {
    (0i64..=12, 1i64..=7).prop_map(|(n, d)| Scalar::ratio(n, d)).boxed()
}

fn weight() -> impl Strategy<Value = Scalar> {
    (1i64..=9, 1i64..=5).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn space(dim: usize) -> impl Strategy<Value = Arc<Space>> {
    prop::collection::vec(weight(), dim).prop_map(|w| Space::new(w).unwrap())
}

fn vec_pair() -> impl Strategy<Value = (Vec1, Vec1)> {
    (1usize..6).prop_flat_map(|dim| {
        (
            space(dim),
            prop::collection::vec(scalar(), dim),
            prop::collection::vec(scalar(), dim),
        )
            .prop_map(|(sp, a, b)| (Vec1::new(sp.clone(), a).unwrap(), Vec1::new(sp, b).unwrap()))
    })
}

fn positive_vec_pair() -> impl Strategy<Value = (Vec1, Vec1)> {
    (1usize..6).prop_flat_map(|dim| {
        (
            space(dim),
            prop::collection::vec(nonneg(), dim),
            prop::collection::vec(nonneg(), dim),
        )
            .prop_map(|(sp, a, b)| (Vec1::new(sp.clone(), a).unwrap(), Vec1::new(sp, b).unwrap()))
    })
}

fn ops(count: usize, entry: fn() -> BoxedStrategy<Scalar>) -> impl Strategy<Value = Vec<Operator>> {
    (1usize..5).prop_flat_map(move |dim| {
        (
            space(dim),
            prop::collection::vec(prop::collection::vec(prop::collection::vec(entry(), dim), dim), count),
        )
            .prop_map(|(sp, mats)| {
                mats.into_iter()
                    .map(|rows| Operator::from_rows(sp.clone(), rows).unwrap())
                    .collect()
            })
    })
}

proptest! {
    #[test]
    fn norm_splits_over_jordan_parts((x, _) in vec_pair()) {
        let (pos, neg) = x.jordan_decompose();
        prop_assert!(pos.is_positive() && neg.is_positive());
        prop_assert_eq!(pos.sub(&neg).unwrap(), x.clone());
        prop_assert!(pos.coords().iter().zip(neg.coords()).all(|(a, b)| a.is_zero() || b.is_zero()));
        prop_assert_eq!(x.norm1(), pos.trace() + neg.trace());
        prop_assert_eq!(x.norm1(), pos.norm1() + neg.norm1());
    }

    #[test]
    fn norm_is_additive_on_the_cone((x, y) in positive_vec_pair()) {
        prop_assert_eq!(x.add(&y).unwrap().norm1(), x.norm1() + y.norm1());
        prop_assert_eq!(x.norm1(), x.trace());
    }

    #[test]
    fn trace_is_linear((x, y) in vec_pair(), c in scalar()) {
        let combo = x.add(&y.scale(&c)).unwrap();
        prop_assert_eq!(combo.trace(), x.trace() + c * y.trace());
    }

    #[test]
    fn dominance_is_a_partial_order(m in ops(3, scalar)) {
        let (a, b, c) = (&m[0], &m[1], &m[2]);
        prop_assert!(dominates(a, a).unwrap());
        if dominates(a, b).unwrap() && dominates(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        if dominates(a, b).unwrap() && dominates(b, c).unwrap() {
            prop_assert!(dominates(a, c).unwrap());
        }
        // a + |b| dominates a
        let pos_b = Operator::from_rows(
            b.space().clone(),
            b.rows().into_iter().map(|r| r.into_iter().map(|x| x.abs()).collect()).collect(),
        ).unwrap();
        prop_assert!(dominates(&a.add(&pos_b).unwrap(), a).unwrap());
    }

    #[test]
    fn operator_norm_is_a_norm(m in ops(2, scalar), c in scalar()) {
        let (a, b) = (&m[0], &m[1]);
        prop_assert_eq!(operator_norm_1(&a.scale(&c)), c.abs() * operator_norm_1(a));
        prop_assert!(operator_norm_1(&a.add(b).unwrap()) <= operator_norm_1(a) + operator_norm_1(b));
        prop_assert!(operator_norm_1(&a.compose(b).unwrap()) <= operator_norm_1(a) * operator_norm_1(b));
    }

    #[test]
    fn operator_norm_bounds_every_image(m in ops(1, scalar), coords in prop::collection::vec(scalar(), 4)) {
        let a = &m[0];
        let x = Vec1::new(a.space().clone(), coords[..a.dim()].to_vec()).unwrap();
        prop_assert!(a.apply(&x).unwrap().norm1() <= operator_norm_1(a) * x.norm1());
    }

    #[test]
    fn contractivity_propagates_to_powers(m in ops(1, nonneg)) {
        let a = &m[0];
        let norm = operator_norm_1(a);
        let contraction = if norm > Scalar::one() { a.scale(&norm.recip()) } else { a.clone() };
        for n in 0..6 {
            prop_assert!(operator_norm_1(&power(&contraction, n)) <= Scalar::one());
        }
    }

    #[test]
    fn separation_is_bounded_by_two_for_contractions(m in ops(2, scalar)) {
        let shrink = |a: &Operator| {
            let n = operator_norm_1(a);
            if n > Scalar::one() { a.scale(&n.recip()) } else { a.clone() }
        };
        let (s, t) = (shrink(&m[0]), shrink(&m[1]));
        let d = separation_sequence(&s, &t, 5).unwrap();
        let two = Scalar::from_int(2);
        prop_assert!(d.values.iter().all(|v| v.is_nonnegative() && *v <= two));
    }
}
