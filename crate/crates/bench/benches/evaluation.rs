use std::hint::black_box;

use bmtl_core::harness::{gen_formula, gen_trace, run_campaign, GenConfig};
use bmtl_core::{
    eval_truth_set, normalize, Direction, Fact, Interval, IntervalSet, PointOracle, Rational,
    RewriteMode, Trace,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

/// `n` unit intervals spaced two apart, with a half-step offset when `shifted`.
fn comb(n: i64, shifted: bool) -> IntervalSet {
    let off = if shifted { Rational::new(1, 2) } else { Rational::zero() };
    IntervalSet::coalesce((0..n).map(|k| {
        let lo = Rational::from_integer(2 * k) + off.clone();
        Interval::closed(lo.clone(), lo + Rational::from_integer(1))
    }))
}

/// Short facts cycling through `p`, `q`, `r`, so truth sets stay fragmented.
fn striped_trace(n: i64) -> Trace {
    let facts = (0..n)
        .map(|k| {
            let lo = Rational::new(7 * k, 2);
            let len = Rational::new(k % 4, 2);
            Fact::new(["p", "q", "r"][(k % 3) as usize], Interval::closed(lo.clone(), lo + len))
        })
        .collect();
    let horizon = Interval::closed(Rational::from_integer(-10), Rational::from_integer(4 * n + 10));
    Trace::new(horizon, facts).unwrap()
}

fn interval_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("interval_set");
    for n in [100, 1000] {
        let (a, b) = (comb(n, false), comb(n, true));
        group.bench_with_input(BenchmarkId::new("union", n), &n, |bench, _| {
            bench.iter(|| black_box(a.union(&b)))
        });
        group.bench_with_input(BenchmarkId::new("intersect", n), &n, |bench, _| {
            bench.iter(|| black_box(a.intersect(&b)))
        });
        let (lo, hi) = (Rational::new(1, 3), Rational::new(5, 4));
        group.bench_with_input(BenchmarkId::new("dilate", n), &n, |bench, _| {
            bench.iter(|| black_box(a.dilate(&lo, &hi)))
        });
        group.bench_with_input(BenchmarkId::new("erode", n), &n, |bench, _| {
            bench.iter(|| black_box(a.erode(&Rational::zero(), &lo, Direction::Future).unwrap()))
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate");
    let cfg = GenConfig { seed: 1, max_depth: 4, ..GenConfig::default() };
    let formulas: Vec<_> = (0..16).map(|i| gen_formula(&cfg, i)).collect();
    for facts in [10, 100, 1000] {
        let tr = striped_trace(facts);
        group.bench_with_input(BenchmarkId::new("truth_set", facts), &facts, |bench, _| {
            bench.iter(|| {
                for f in &formulas {
                    black_box(eval_truth_set(f, &tr));
                }
            })
        });
    }
    let cfg = GenConfig { seed: 1, ..GenConfig::default() };
    let f = gen_formula(&cfg, 3);
    let tr = gen_trace(&cfg, 3);
    let points: Vec<Rational> = (-40..=40).map(|k| Rational::new(k, 4)).collect();
    group.bench_function("point_oracle_81_points", |bench| {
        bench.iter(|| {
            let mut oracle = PointOracle::new(&f, &tr);
            for t in &points {
                black_box(oracle.eval_at(t).unwrap());
            }
        })
    });
    group.finish();
}

fn rewriting(c: &mut Criterion) {
    let cfg = GenConfig { seed: 2, max_depth: 5, ..GenConfig::default() };
    let formulas: Vec<_> = (0..32).map(|i| gen_formula(&cfg, i)).collect();
    c.bench_function("normalize_punctual_32", |bench| {
        bench.iter(|| {
            for f in &formulas {
                black_box(normalize(f, &RewriteMode::Punctual).unwrap());
            }
        })
    });
}

fn campaigns(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for mode in [RewriteMode::Punctual, RewriteMode::SingletonFree { kappa: None, lambda: None }] {
        let cfg = GenConfig { seed: 42, trials: 100, ..GenConfig::for_mode(&mode) };
        group.bench_function(format!("{}_100_trials", mode.name()), |bench| {
            bench.iter(|| black_box(run_campaign(&cfg, &mode)))
        });
    }
    group.finish();
}

criterion_group!(benches, interval_sets, evaluation, rewriting, campaigns);
criterion_main!(benches);
