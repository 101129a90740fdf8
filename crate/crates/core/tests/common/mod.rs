#![allow(dead_code)]

use bmtl_core::harness::{gen_formula, gen_trace, GenConfig};
use bmtl_core::{Bound, Formula, Interval, IntervalSet, Rational, Trace};
use proptest::prelude::*;

/// Universe used by the interval-set strategies.
pub const SPAN: i64 = 6;

pub fn universe() -> Interval {
    Interval::closed(Rational::from_integer(-SPAN), Rational::from_integer(SPAN))
}

/// Rational in `[lo, hi]` with denominator at most `max_den`.
pub fn rational(lo: i64, hi: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| Rational::new(n, d)))
}

/// Interval inside `[-SPAN, SPAN]` with random endpoint closedness.
pub fn interval(max_den: i64) -> impl Strategy<Value = Interval> {
    (rational(-SPAN, SPAN, max_den), rational(-SPAN, SPAN, max_den), any::<bool>(), any::<bool>())
        .prop_map(|(a, b, lc, hc)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if lo == hi {
                Interval::point(lo)
            } else {
                Interval::new(lo, hi, lc, hc).expect("lo < hi")
            }
        })
}

pub fn interval_set(max_den: i64) -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec(interval(max_den), 0..5).prop_map(IntervalSet::coalesce)
}

pub fn bound(max: i64, max_den: i64) -> impl Strategy<Value = Bound> {
    (rational(0, max, max_den), rational(0, max, max_den)).prop_map(|(a, b)| {
        let (i1, i2) = if a <= b { (a, b) } else { (b, a) };
        Bound::new(i1, i2).expect("sorted, non-negative")
    })
}

/// Formulas over `p`, `q`, `r` including negation.
pub fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::pred),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = || bound(4, 4);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, c)| Formula::and(a, c)),
            (b(), inner.clone()).prop_map(|(b, a)| Formula::box_plus(b, a)),
            (b(), inner.clone()).prop_map(|(b, a)| Formula::box_minus(b, a)),
            (b(), inner.clone()).prop_map(|(b, a)| Formula::dia_plus(b, a)),
            (b(), inner.clone()).prop_map(|(b, a)| Formula::dia_minus(b, a)),
            (inner.clone(), b(), inner.clone()).prop_map(|(a, b, c)| Formula::since(a, b, c)),
            (inner.clone(), b(), inner).prop_map(|(a, b, c)| Formula::until(a, b, c)),
        ]
    })
}

pub fn config(seed: u64) -> GenConfig {
    GenConfig { seed, ..GenConfig::default() }
}

pub fn singleton_free_config(seed: u64) -> GenConfig {
    GenConfig { seed, singleton_free: true, ..GenConfig::default() }
}

/// Negation-free formula from the campaign generator.
pub fn generated_formula() -> impl Strategy<Value = Formula> {
    (any::<u64>(), 0u64..10_000).prop_map(|(seed, idx)| gen_formula(&config(seed), idx))
}

pub fn generated_trace() -> impl Strategy<Value = Trace> {
    (any::<u64>(), 0u64..10_000).prop_map(|(seed, idx)| gen_trace(&config(seed), idx))
}

/// Points on a `1/step_den` grid covering `[lo, hi]`.
pub fn grid(lo: &Rational, hi: &Rational, step_den: i64) -> Vec<Rational> {
    let step = Rational::new(1, step_den);
    let mut t = lo.clone();
    let mut out = Vec::new();
    while &t <= hi {
        out.push(t.clone());
        t = &t + &step;
    }
    out
}
