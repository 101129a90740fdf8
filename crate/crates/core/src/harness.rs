//! Seeded random formulas and traces, and equivalence campaigns that check
//! the rewriter against the evaluator and the point oracle.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `GenConfig::seed` and switched to stream `4 * trial + purpose`, where
//! purpose is 0 for the formula, 1 for the trace, 2 for the campaign's
//! wrapping box and slack parameters, and 3 for sample points. Every trial
//! is therefore reproducible in isolation and independent of thread
//! scheduling.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::eval::{eval_truth_set, ReliableRegion};
use crate::formula::{Bound, Formula};
use crate::interval::Interval;
use crate::oracle::PointOracle;
use crate::rational::Rational;
use crate::rewrite::{RewriteMode, Rewriter};
use crate::trace::{Fact, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum syntax-tree height of generated formulas (atoms have height 0).
    pub max_depth: usize,
    pub predicate_pool: Vec<String>,
    pub bound_denominator_max: u32,
    pub bound_max: Rational,
    pub facts_per_trace: usize,
    pub horizon_length: Rational,
    pub trials: usize,
    /// Restrict generated windows to what the singleton-free rules accept:
    /// every window non-singleton, every box window with `3*i1 >= i2`.
    pub singleton_free: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_depth: 3,
            predicate_pool: vec!["p".into(), "q".into(), "r".into()],
            bound_denominator_max: 4,
            bound_max: Rational::from_integer(4),
            facts_per_trace: 6,
            horizon_length: Rational::from_integer(40),
            trials: 100,
            singleton_free: false,
        }
    }
}

impl GenConfig {
    /// Defaults suited to campaigns in `mode`.
    pub fn for_mode(mode: &RewriteMode) -> Self {
        GenConfig {
            singleton_free: matches!(mode, RewriteMode::SingletonFree { .. }),
            ..GenConfig::default()
        }
    }
}

const FORMULA_STREAM: u64 = 0;
const TRACE_STREAM: u64 = 1;
const CAMPAIGN_STREAM: u64 = 2;
const POINT_STREAM: u64 = 3;

/// Deterministic generator for stream `purpose` of trial `index`.
pub fn stream_rng(seed: u64, index: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(purpose));
    rng
}

fn floor_i64(r: &Rational) -> i64 {
    r.numer().div_floor(r.denom()).to_i64().expect("generator range fits in i64")
}

fn ceil_i64(r: &Rational) -> i64 {
    -floor_i64(&-r)
}

struct Gen<'c> {
    cfg: &'c GenConfig,
}

impl Gen<'_> {
    fn denominator(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(1..=i64::from(self.cfg.bound_denominator_max.max(1)))
    }

    /// Rational in `[lo, hi]` with a random denominator up to the cap.
    fn rational_in(&self, rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
        let d = self.denominator(rng);
        let dq = Rational::from_integer(d);
        let (a, b) = (ceil_i64(&(lo * &dq)), floor_i64(&(hi * &dq)));
        if a > b {
            return lo.clone();
        }
        Rational::new(rng.gen_range(a..=b), d)
    }

    fn window(&self, rng: &mut ChaCha8Rng) -> (Rational, Rational) {
        let zero = Rational::zero();
        let a = self.rational_in(rng, &zero, &self.cfg.bound_max);
        let b = self.rational_in(rng, &zero, &self.cfg.bound_max);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn bound(&self, rng: &mut ChaCha8Rng, for_box: bool) -> Bound {
        if !self.cfg.singleton_free {
            let (a, b) = self.window(rng);
            return Bound::new(a, b).expect("sorted non-negative window");
        }
        let three = Rational::from_integer(3);
        for _ in 0..64 {
            let (a, b) = self.window(rng);
            if a < b && (!for_box || &three * &a >= b) {
                return Bound::new(a, b).expect("sorted non-negative window");
            }
        }
        let m = self.cfg.bound_max.clone();
        Bound::new(&m / &Rational::from_integer(2), m).expect("half-width window")
    }

    fn leaf(&self, rng: &mut ChaCha8Rng) -> Formula {
        let pool = &self.cfg.predicate_pool;
        if pool.is_empty() || rng.gen_bool(0.1) {
            Formula::Top
        } else {
            Formula::Pred(pool[rng.gen_range(0..pool.len())].clone())
        }
    }

    fn formula(&self, rng: &mut ChaCha8Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let sub = depth - 1;
        match rng.gen_range(0..7) {
            0 => Formula::and(self.formula(rng, sub), self.formula(rng, sub)),
            1 => Formula::box_plus(self.bound(rng, true), self.formula(rng, sub)),
            2 => Formula::box_minus(self.bound(rng, true), self.formula(rng, sub)),
            3 => Formula::dia_plus(self.bound(rng, false), self.formula(rng, sub)),
            4 => Formula::dia_minus(self.bound(rng, false), self.formula(rng, sub)),
            5 => {
                let a = self.formula(rng, sub);
                let bd = self.bound(rng, false);
                Formula::since(a, bd, self.formula(rng, sub))
            }
            _ => {
                let a = self.formula(rng, sub);
                let bd = self.bound(rng, false);
                Formula::until(a, bd, self.formula(rng, sub))
            }
        }
    }
}

/// Random negation-free formula of height at most `cfg.max_depth`.
pub fn gen_formula(cfg: &GenConfig, index: u64) -> Formula {
    let mut rng = stream_rng(cfg.seed, index, FORMULA_STREAM);
    Gen { cfg }.formula(&mut rng, cfg.max_depth)
}

/// A box window honoring `cfg.singleton_free`.
pub fn gen_box_bound(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Bound {
    Gen { cfg }.bound(rng, true)
}

/// Random trace over `[-L/2, L/2]` with `cfg.facts_per_trace` closed spans.
pub fn gen_trace(cfg: &GenConfig, index: u64) -> Trace {
    let mut rng = stream_rng(cfg.seed, index, TRACE_STREAM);
    let g = Gen { cfg };
    let half = &cfg.horizon_length / &Rational::from_integer(2);
    let (lo, hi) = (-&half, half.clone());
    let max_len = &cfg.horizon_length / &Rational::from_integer(4);
    let mut facts = Vec::with_capacity(cfg.facts_per_trace);
    for _ in 0..cfg.facts_per_trace {
        let Some(pred) = pick(&mut rng, &cfg.predicate_pool) else { break };
        let start = g.rational_in(&mut rng, &lo, &hi);
        let len = if rng.gen_bool(0.15) {
            Rational::zero()
        } else {
            g.rational_in(&mut rng, &Rational::zero(), &max_len)
        };
        let end = (&start + &len).min(hi.clone());
        facts.push(Fact::new(pred, Interval::closed(start, end)));
    }
    Trace::new(Interval::closed(lo, hi), facts).expect("spans are clipped to the horizon")
}

fn pick(rng: &mut ChaCha8Rng, pool: &[String]) -> Option<String> {
    (!pool.is_empty()).then(|| pool[rng.gen_range(0..pool.len())].clone())
}

/// Random slack in `(0, 4]`.
pub fn gen_slack(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Rational {
    let d = Gen { cfg }.denominator(rng);
    Rational::new(rng.gen_range(1..=4 * d), d)
}

/// `n` sample points inside `region`: alternately on a grid fine enough to
/// hit generated breakpoints, and at uniformly spread positions.
pub fn gen_points(cfg: &GenConfig, rng: &mut ChaCha8Rng, region: &Interval, n: usize) -> Vec<Rational> {
    let lcm = (1..=i64::from(cfg.bound_denominator_max.max(1)))
        .fold(BigInt::from(1), |acc, d| acc.lcm(&BigInt::from(d)));
    let grid = 2 * lcm.to_i64().expect("small lcm");
    let g = Rational::from_integer(grid);
    let (a, b) = (ceil_i64(&(region.lo() * &g)), floor_i64(&(region.hi() * &g)));
    (0..n)
        .map(|k| {
            if k % 2 == 0 && a <= b {
                Rational::new(rng.gen_range(a..=b), grid)
            } else {
                let frac = Rational::new(rng.gen_range(0..=1000), 1000);
                region.lo() + &(region.length() * frac)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("reliable region is empty: the formulas reach across the whole horizon")]
    EmptyRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Equal,
    NotEqual { differing: Interval, witness: Rational },
}

/// The reliable region shared by several formulas over one trace.
pub fn shared_region(formulas: &[&Formula], tr: &Trace) -> ReliableRegion {
    let reach = formulas
        .iter()
        .map(|f| f.temporal_reach())
        .reduce(|a, b| a.max(&b))
        .expect("at least one formula");
    ReliableRegion::from_reach(&reach, tr.horizon())
}

/// Compares the truth sets of `f1` and `f2` on `tr` inside their shared
/// reliable region.
pub fn check_equivalence(f1: &Formula, f2: &Formula, tr: &Trace) -> Result<Verdict, HarnessError> {
    let region = shared_region(&[f1, f2], tr);
    let universe = region.interval().ok_or(HarnessError::EmptyRegion)?;
    let (a, b) = (eval_truth_set(f1, tr), eval_truth_set(f2, tr));
    let diff = a
        .symmetric_difference_within(&b, universe)
        .expect("clipped sets lie in the region");
    Ok(match diff.iter().next() {
        None => Verdict::Equal,
        Some(first) => Verdict::NotEqual { differing: first.clone(), witness: first.witness() },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The rewriter rejected its input.
    Rewrite,
    /// Truth sets of the original and rewritten formula differ.
    TruthSet,
    /// The point oracle on the original disagrees with the rewritten truth set.
    Oracle,
    /// Two slack choices produced different truth sets.
    Slack,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: u64,
    pub seed: u64,
    pub kind: FailureKind,
    pub formula: String,
    pub rewritten: Option<String>,
    pub trace: String,
    pub differing_interval: Option<Interval>,
    pub witness: Option<Rational>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub mode: String,
    pub seed: u64,
    pub trials: usize,
    /// Trials with a non-empty reliable region; `passes + failures.len()`.
    pub trials_run: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub empty_regions: usize,
    pub oracle_points: usize,
    pub slack_pairs: usize,
    pub wall_time_ms: u64,
}

impl CampaignReport {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

enum Outcome {
    Pass { oracle_points: usize, slack_pair: bool },
    Fail(Box<Failure>),
    EmptyRegion,
}

/// Oracle points per trial.
pub const ORACLE_POINTS_PER_TRIAL: usize = 10;

/// Runs `cfg.trials` box-elimination trials under `mode`.
///
/// Each trial wraps a random formula in a fresh box of random polarity,
/// normalizes it, and compares truth sets inside the reliable region. A
/// singleton-free mode without explicit slacks draws `kappa` and `lambda`
/// from `(0, 4]` per trial, then rewrites again with a second random pair
/// and requires identical truth sets inside the region both rewritings
/// share. `slack_pairs` counts the trials where that region is non-empty.
pub fn run_campaign(cfg: &GenConfig, mode: &RewriteMode) -> CampaignReport {
    run_campaign_with(cfg, &Rewriter::new(mode.clone()))
}

#[doc(hidden)]
pub fn run_campaign_with(cfg: &GenConfig, rewriter: &Rewriter) -> CampaignReport {
    let started = Instant::now();
    let outcomes: Vec<Outcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|idx| run_trial(cfg, rewriter, idx))
        .collect();
    let mut report = CampaignReport {
        mode: rewriter.mode().name().to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        trials_run: 0,
        passes: 0,
        failures: Vec::new(),
        empty_regions: 0,
        oracle_points: 0,
        slack_pairs: 0,
        wall_time_ms: 0,
    };
    for outcome in outcomes {
        match outcome {
            Outcome::Pass { oracle_points, slack_pair } => {
                report.trials_run += 1;
                report.passes += 1;
                report.oracle_points += oracle_points;
                report.slack_pairs += usize::from(slack_pair);
            }
            Outcome::Fail(failure) => {
                report.trials_run += 1;
                report.failures.push(*failure);
            }
            Outcome::EmptyRegion => report.empty_regions += 1,
        }
    }
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    report
}

fn run_trial(cfg: &GenConfig, rewriter: &Rewriter, idx: u64) -> Outcome {
    let body = gen_formula(cfg, idx);
    let tr = gen_trace(cfg, idx);
    let mut rng = stream_rng(cfg.seed, idx, CAMPAIGN_STREAM);
    let bound = gen_box_bound(cfg, &mut rng);
    let original = if rng.gen_bool(0.5) {
        Formula::box_plus(bound, body)
    } else {
        Formula::box_minus(bound, body)
    };
    let fail = |kind, rewritten: Option<&Formula>| Failure {
        trial: idx,
        seed: cfg.seed,
        kind,
        formula: original.to_string(),
        rewritten: rewritten.map(|f| f.to_string()),
        trace: tr.to_string(),
        differing_interval: None,
        witness: None,
        message: None,
    };

    let (mode, alternate) = match rewriter.mode() {
        RewriteMode::Punctual => (RewriteMode::Punctual, None),
        RewriteMode::SingletonFree { kappa, lambda } => {
            let k = kappa.clone().unwrap_or_else(|| gen_slack(cfg, &mut rng));
            let l = lambda.clone().unwrap_or_else(|| gen_slack(cfg, &mut rng));
            let alternate = (kappa.is_none() || lambda.is_none()).then(|| loop {
                let k2 = kappa.clone().unwrap_or_else(|| gen_slack(cfg, &mut rng));
                let l2 = lambda.clone().unwrap_or_else(|| gen_slack(cfg, &mut rng));
                if (&k2, &l2) != (&k, &l) {
                    break (k2, l2);
                }
            });
            (RewriteMode::singleton_free(k, l), alternate)
        }
    };

    let output = match rewriter.with_mode(mode).normalize(&original) {
        Ok(report) => report.output,
        Err(e) => {
            return Outcome::Fail(Box::new(Failure {
                message: Some(e.to_string()),
                ..fail(FailureKind::Rewrite, None)
            }))
        }
    };

    match check_equivalence(&original, &output, &tr) {
        Err(HarnessError::EmptyRegion) => return Outcome::EmptyRegion,
        Ok(Verdict::NotEqual { differing, witness }) => {
            return Outcome::Fail(Box::new(Failure {
                differing_interval: Some(differing),
                witness: Some(witness),
                ..fail(FailureKind::TruthSet, Some(&output))
            }))
        }
        Ok(Verdict::Equal) => {}
    }

    let region = shared_region(&[&original, &output], &tr);
    let region = region.interval().expect("checked non-empty above");
    let rewritten_truth = eval_truth_set(&output, &tr);
    let mut oracle = PointOracle::new(&original, &tr);
    let mut point_rng = stream_rng(cfg.seed, idx, POINT_STREAM);
    for t in gen_points(cfg, &mut point_rng, region, ORACLE_POINTS_PER_TRIAL) {
        let expected = oracle.eval_at(&t).expect("region lies inside the horizon");
        if expected != rewritten_truth.contains_point(&t) {
            return Outcome::Fail(Box::new(Failure {
                differing_interval: Some(Interval::point(t.clone())),
                witness: Some(t),
                ..fail(FailureKind::Oracle, Some(&output))
            }));
        }
    }

    let mut slack_pair = false;
    if let Some((k2, l2)) = alternate {
        let other = match rewriter
            .with_mode(RewriteMode::singleton_free(k2, l2))
            .normalize(&original)
        {
            Ok(report) => report.output,
            Err(e) => {
                return Outcome::Fail(Box::new(Failure {
                    message: Some(e.to_string()),
                    ..fail(FailureKind::Rewrite, None)
                }))
            }
        };
        let region = shared_region(&[&original, &output, &other], &tr);
        slack_pair = !region.is_empty();
        let a = region.restrict(&rewritten_truth);
        let b = region.restrict(&eval_truth_set(&other, &tr));
        if a != b {
            let universe = region.interval().cloned().unwrap_or_else(|| tr.horizon().clone());
            let diff = a.symmetric_difference_within(&b, &universe).expect("restricted sets");
            let first = diff.iter().next().cloned();
            return Outcome::Fail(Box::new(Failure {
                witness: first.as_ref().map(Interval::witness),
                differing_interval: first,
                message: Some(format!("alternate rewriting: {other}")),
                ..fail(FailureKind::Slack, Some(&output))
            }));
        }
    }

    Outcome::Pass { oracle_points: ORACLE_POINTS_PER_TRIAL, slack_pair }
}
