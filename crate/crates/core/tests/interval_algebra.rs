mod common;

use bmtl_core::{Direction, Interval, IntervalSet, Rational};
use common::{bound, grid, interval, interval_set, universe, SPAN};
use proptest::prelude::*;

/// Pieces whose union is exactly `i`, cut at the midpoint.
fn split(i: &Interval, closed_left: bool) -> Vec<Interval> {
    if i.is_singleton() {
        return vec![i.clone()];
    }
    let m = i.lo().midpoint(i.hi());
    vec![
        Interval::new(i.lo().clone(), m.clone(), i.lo_closed(), closed_left).unwrap(),
        Interval::new(m, i.hi().clone(), !closed_left, i.hi_closed()).unwrap(),
    ]
}

fn is_canonical(s: &IntervalSet) -> bool {
    s.intervals().windows(2).all(|w| {
        w[0].hi() < w[1].lo() || (w[0].hi() == w[1].lo() && !w[0].hi_closed() && !w[1].lo_closed())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn coalesce_is_canonical_and_idempotent(raw in prop::collection::vec(interval(3), 0..6)) {
        let s = IntervalSet::coalesce(raw.clone());
        prop_assert!(is_canonical(&s));
        prop_assert_eq!(IntervalSet::coalesce(s.intervals().to_vec()), s.clone());
        for t in grid(&Rational::from_integer(-SPAN), &Rational::from_integer(SPAN), 24) {
            prop_assert_eq!(s.contains_point(&t), raw.iter().any(|i| i.contains(&t)));
        }
    }

    #[test]
    fn coalesce_ignores_presentation(
        (raw, rearranged) in prop::collection::vec((interval(3), any::<bool>(), any::<bool>()), 0..6)
            .prop_flat_map(|items| {
                let raw: Vec<Interval> = items.iter().map(|(i, _, _)| i.clone()).collect();
                let mut pieces = Vec::new();
                for (i, cut, dup) in &items {
                    pieces.extend(split(i, *cut));
                    if *dup {
                        pieces.push(i.clone());
                    }
                }
                (Just(raw), Just(pieces).prop_shuffle())
            })
    ) {
        let a = IntervalSet::coalesce(raw);
        let b = IntervalSet::coalesce(rearranged);
        for t in grid(&Rational::from_integer(-SPAN), &Rational::from_integer(SPAN), 24) {
            prop_assert_eq!(a.contains_point(&t), b.contains_point(&t));
        }
        prop_assert_eq!(a, b);
    }

    #[test]
    fn union_and_intersection_laws(s in interval_set(3), t in interval_set(3), u in interval_set(3)) {
        prop_assert_eq!(s.union(&t), t.union(&s));
        prop_assert_eq!(s.intersect(&t), t.intersect(&s));
        prop_assert_eq!(s.union(&t).union(&u), s.union(&t.union(&u)));
        prop_assert_eq!(s.intersect(&t).intersect(&u), s.intersect(&t.intersect(&u)));
        prop_assert_eq!(s.intersect(&t.union(&u)), s.intersect(&t).union(&s.intersect(&u)));
        for p in grid(&Rational::from_integer(-SPAN), &Rational::from_integer(SPAN), 24) {
            prop_assert_eq!(s.union(&t).contains_point(&p), s.contains_point(&p) || t.contains_point(&p));
            prop_assert_eq!(s.intersect(&t).contains_point(&p), s.contains_point(&p) && t.contains_point(&p));
        }
    }

    #[test]
    fn complement_involution_and_de_morgan(s in interval_set(3), t in interval_set(3)) {
        let w = universe();
        let not = |x: &IntervalSet| x.complement_within(&w).unwrap();
        prop_assert_eq!(not(&not(&s)), s.clone());
        prop_assert_eq!(not(&s.union(&t)), not(&s).intersect(&not(&t)));
        prop_assert_eq!(not(&s.intersect(&t)), not(&s).union(&not(&t)));
        prop_assert!(s.intersect(&not(&s)).is_empty());
        prop_assert_eq!(s.union(&not(&s)), IntervalSet::from_interval(w));
    }

    #[test]
    fn dilate_erode_adjunction(s in interval_set(2), t in interval_set(2), b in bound(3, 3)) {
        let (i1, i2) = (b.i1().clone(), b.i2().clone());
        let future = t.erode(&i1, &i2, Direction::Future).unwrap();
        prop_assert_eq!(s.dilate(&i1, &i2).is_subset(&t), s.is_subset(&future));
        let past = t.erode(&i1, &i2, Direction::Past).unwrap();
        prop_assert_eq!(s.dilate(&-&i2, &-&i1).is_subset(&t), s.is_subset(&past));
        // The unit and counit of the connection.
        prop_assert!(s.is_subset(&s.dilate(&i1, &i2).erode(&i1, &i2, Direction::Future).unwrap()));
        prop_assert!(future.dilate(&i1, &i2).is_subset(&t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Set endpoints have denominators dividing 2 and bounds dividing 3, so
    // every breakpoint lies on the 1/6 grid; outer samples use a quarter of
    // that and the inner window scan half again.
    #[test]
    fn dilate_and_erode_match_grid_oracle(s in interval_set(2), b in bound(3, 3)) {
        let (i1, i2) = (b.i1().clone(), b.i2().clone());
        let dil_f = s.dilate(&i1, &i2);
        let dil_p = s.dilate(&-&i2, &-&i1);
        let ero_f = s.erode(&i1, &i2, Direction::Future).unwrap();
        let ero_p = s.erode(&i1, &i2, Direction::Past).unwrap();
        let offsets = grid(&i1, &i2, 48);
        let reach = Rational::from_integer(SPAN + 4);
        for t in grid(&-&reach, &reach, 24) {
            let fwd = |d: &Rational| s.contains_point(&(&t + d));
            let bwd = |d: &Rational| s.contains_point(&(&t - d));
            prop_assert_eq!(dil_f.contains_point(&t), offsets.iter().any(bwd), "dilate {}", t);
            prop_assert_eq!(dil_p.contains_point(&t), offsets.iter().any(fwd), "dilate past {}", t);
            prop_assert_eq!(ero_f.contains_point(&t), offsets.iter().all(fwd), "erode {}", t);
            prop_assert_eq!(ero_p.contains_point(&t), offsets.iter().all(bwd), "erode past {}", t);
        }
    }
}

#[test]
fn erode_rejects_negative_window() {
    let s = IntervalSet::from_interval(universe());
    assert!(s.erode(&Rational::from_integer(-1), &Rational::from_integer(1), Direction::Future).is_err());
}
