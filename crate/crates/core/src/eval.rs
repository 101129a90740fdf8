//! Exact truth sets over a trace.
//!
//! Truth sets are computed bottom-up with interval-set algebra: the "once"
//! operators dilate, the "always" operators erode, and since/until restrict
//! a dilation to each maximal interval of the left operand. `⊤` denotes the
//! horizon and negation complements within it, so results near the horizon
//! edges are only meaningful inside the [`ReliableRegion`].

use serde::Serialize;

use crate::formula::{Formula, Reach};
use crate::interval::{Direction, Interval, IntervalSet};
use crate::trace::Trace;

/// Computes `{t : M, t ⊨ f}` for the model presented by `tr`.
pub fn eval_truth_set(f: &Formula, tr: &Trace) -> IntervalSet {
    let horizon = tr.horizon();
    match f {
        Formula::Pred(p) => tr.truth_base(p),
        Formula::Top => IntervalSet::from_interval(horizon.clone()),
        Formula::Not(a) => eval_truth_set(a, tr)
            .intersect_interval(horizon)
            .complement_within(horizon)
            .expect("members were clipped to the horizon"),
        Formula::And(a, b) => eval_truth_set(a, tr).intersect(&eval_truth_set(b, tr)),
        Formula::DiaMinus(bd, a) => eval_truth_set(a, tr).dilate(bd.i1(), bd.i2()),
        Formula::DiaPlus(bd, a) => eval_truth_set(a, tr).dilate(&-bd.i2(), &-bd.i1()),
        Formula::BoxMinus(bd, a) => eval_truth_set(a, tr)
            .erode(bd.i1(), bd.i2(), Direction::Past)
            .expect("bounds are non-negative"),
        Formula::BoxPlus(bd, a) => eval_truth_set(a, tr)
            .erode(bd.i1(), bd.i2(), Direction::Future)
            .expect("bounds are non-negative"),
        Formula::Since(a, bd, b) => {
            let (lhs, rhs) = (eval_truth_set(a, tr), eval_truth_set(b, tr));
            windowed_reach(&lhs, &rhs, |s| s.dilate(bd.i1(), bd.i2()))
        }
        Formula::Until(a, bd, b) => {
            let (lhs, rhs) = (eval_truth_set(a, tr), eval_truth_set(b, tr));
            windowed_reach(&lhs, &rhs, |s| s.dilate(&-bd.i2(), &-bd.i1()))
        }
    }
}

/// Since/until core: `[t', t] ⊆ lhs` holds exactly when `t'` and `t` share a
/// maximal member of `lhs`, so the dilation of `rhs` is taken per member.
fn windowed_reach(
    lhs: &IntervalSet,
    rhs: &IntervalSet,
    shift: impl Fn(&IntervalSet) -> IntervalSet,
) -> IntervalSet {
    let pieces = lhs.iter().flat_map(|j| {
        let anchors = rhs.intersect_interval(j);
        shift(&anchors).intersect_interval(j).intervals().to_vec()
    });
    IntervalSet::coalesce(pieces)
}

/// The part of the horizon where a truth set cannot be influenced by the
/// horizon edges. `None` when the formula reaches across the whole horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReliableRegion(pub Option<Interval>);

impl ReliableRegion {
    pub fn from_reach(reach: &Reach, horizon: &Interval) -> Self {
        if &reach.past + &reach.future >= horizon.length() {
            return ReliableRegion(None);
        }
        ReliableRegion(Some(Interval::closed(
            horizon.lo() + &reach.past,
            horizon.hi() - &reach.future,
        )))
    }

    pub fn interval(&self) -> Option<&Interval> {
        self.0.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    /// Restricts `set` to the region (empty when the region is).
    pub fn restrict(&self, set: &IntervalSet) -> IntervalSet {
        match &self.0 {
            Some(r) => set.intersect_interval(r),
            None => IntervalSet::empty(),
        }
    }
}

pub fn reliable_region(f: &Formula, tr: &Trace) -> ReliableRegion {
    ReliableRegion::from_reach(&f.temporal_reach(), tr.horizon())
}
