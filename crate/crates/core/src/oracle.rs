//! Point-wise reference semantics, independent of the interval-set evaluator.
//!
//! The oracle decides `M, t ⊨ f` by direct recursion on the formula, reading
//! the raw facts of the trace. Dense quantifiers over a window are resolved
//! by sampling: each subformula has a finite set of critical points outside
//! of which its truth value is locally constant, so a window is covered by
//! its endpoints, the critical points it contains, and one midpoint per gap
//! between consecutive samples.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::rational::Rational;
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("point {point} lies outside the horizon {horizon}")]
    PointOutsideHorizon { point: Rational, horizon: String },
}

struct Node<'f> {
    formula: &'f Formula,
    children: Vec<usize>,
    /// Superset of the boundary points of this node's truth set.
    critical: Vec<Rational>,
    /// For since/until: critical points of both operands.
    operands: Vec<Rational>,
}

/// Memoizing point evaluator for one (formula, trace) pair.
pub struct PointOracle<'a> {
    trace: &'a Trace,
    nodes: Vec<Node<'a>>,
    memo: HashMap<(usize, Rational), bool>,
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v.dedup();
    v
}

fn shifted<'p>(points: &'p [Rational], by: &Rational) -> impl Iterator<Item = Rational> + 'p {
    let by = by.clone();
    points.iter().map(move |p| p + &by)
}

impl<'a> PointOracle<'a> {
    pub fn new(f: &'a Formula, trace: &'a Trace) -> Self {
        let mut oracle = PointOracle { trace, nodes: Vec::new(), memo: HashMap::new() };
        oracle.build(f);
        oracle
    }

    fn build(&mut self, f: &'a Formula) -> usize {
        let children: Vec<usize> = f.children().into_iter().map(|c| self.build(c)).collect();
        let horizon = self.trace.horizon();
        let crit = |k: usize| self.nodes[children[k]].critical.clone();
        let mut operands = Vec::new();
        let critical = match f {
            Formula::Pred(p) => self
                .trace
                .facts()
                .iter()
                .filter(|fact| &fact.predicate == p)
                .flat_map(|fact| [fact.span.lo().clone(), fact.span.hi().clone()])
                .collect(),
            Formula::Top => vec![horizon.lo().clone(), horizon.hi().clone()],
            Formula::Not(_) => {
                let mut v = crit(0);
                v.extend([horizon.lo().clone(), horizon.hi().clone()]);
                v
            }
            Formula::And(..) => [crit(0), crit(1)].concat(),
            Formula::DiaMinus(bd, _) | Formula::BoxMinus(bd, _) => {
                let a = crit(0);
                shifted(&a, bd.i1()).chain(shifted(&a, bd.i2())).collect()
            }
            Formula::DiaPlus(bd, _) | Formula::BoxPlus(bd, _) => {
                let a = crit(0);
                shifted(&a, &-bd.i1()).chain(shifted(&a, &-bd.i2())).collect()
            }
            Formula::Since(_, bd, _) | Formula::Until(_, bd, _) => {
                operands = sorted([crit(0), crit(1)].concat());
                let sign = |r: &Rational| match f {
                    Formula::Since(..) => r.clone(),
                    _ => -r,
                };
                let mut v = crit(0);
                v.extend(shifted(&operands, &sign(bd.i1())));
                v.extend(shifted(&operands, &sign(bd.i2())));
                v
            }
        };
        self.nodes.push(Node { formula: f, children, critical: sorted(critical), operands });
        self.nodes.len() - 1
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Decides `M, t ⊨ f` for a point inside the horizon.
    pub fn eval_at(&mut self, t: &Rational) -> Result<bool, OracleError> {
        if !self.trace.horizon().contains(t) {
            return Err(OracleError::PointOutsideHorizon {
                point: t.clone(),
                horizon: self.trace.horizon().to_string(),
            });
        }
        Ok(self.holds(self.root(), t))
    }

    fn holds(&mut self, node: usize, t: &Rational) -> bool {
        if let Some(&v) = self.memo.get(&(node, t.clone())) {
            return v;
        }
        let v = self.decide(node, t);
        self.memo.insert((node, t.clone()), v);
        v
    }

    fn decide(&mut self, node: usize, t: &Rational) -> bool {
        let f = self.nodes[node].formula;
        let kids = self.nodes[node].children.clone();
        let horizon = self.trace.horizon();
        match f {
            Formula::Pred(p) => self
                .trace
                .facts()
                .iter()
                .any(|fact| &fact.predicate == p && fact.span.contains(t)),
            Formula::Top => horizon.contains(t),
            Formula::Not(_) => horizon.contains(t) && !self.holds(kids[0], t),
            Formula::And(..) => self.holds(kids[0], t) && self.holds(kids[1], t),
            Formula::DiaMinus(bd, _) => {
                let pts = self.samples(kids[0], &(t - bd.i2()), &(t - bd.i1()));
                pts.iter().any(|s| self.holds(kids[0], s))
            }
            Formula::DiaPlus(bd, _) => {
                let pts = self.samples(kids[0], &(t + bd.i1()), &(t + bd.i2()));
                pts.iter().any(|s| self.holds(kids[0], s))
            }
            Formula::BoxMinus(bd, _) => {
                let pts = self.samples(kids[0], &(t - bd.i2()), &(t - bd.i1()));
                pts.iter().all(|s| self.holds(kids[0], s))
            }
            Formula::BoxPlus(bd, _) => {
                let pts = self.samples(kids[0], &(t + bd.i1()), &(t + bd.i2()));
                pts.iter().all(|s| self.holds(kids[0], s))
            }
            Formula::Since(_, bd, _) => {
                // Walk backwards from t while the left operand keeps holding.
                let latest = t - bd.i1();
                let pts = grid(&self.nodes[node].operands, &(t - bd.i2()), t, std::slice::from_ref(&latest));
                for s in pts.iter().rev() {
                    if !self.holds(kids[0], s) {
                        return false;
                    }
                    if s <= &latest && self.holds(kids[1], s) {
                        return true;
                    }
                }
                false
            }
            Formula::Until(_, bd, _) => {
                let earliest = t + bd.i1();
                let pts = grid(&self.nodes[node].operands, t, &(t + bd.i2()), std::slice::from_ref(&earliest));
                for s in &pts {
                    if !self.holds(kids[0], s) {
                        return false;
                    }
                    if s >= &earliest && self.holds(kids[1], s) {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn samples(&self, child: usize, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        grid(&self.nodes[child].critical, lo, hi, &[])
    }
}

/// Sample points covering `[lo, hi]`: both ends, `extra`, every critical
/// point strictly inside, and the midpoint of each resulting gap.
fn grid(critical: &[Rational], lo: &Rational, hi: &Rational, extra: &[Rational]) -> Vec<Rational> {
    let start = critical.partition_point(|c| c <= lo);
    let end = critical.partition_point(|c| c < hi);
    let mut pts: Vec<Rational> = Vec::with_capacity(2 * (end.saturating_sub(start) + extra.len()) + 3);
    pts.push(lo.clone());
    pts.push(hi.clone());
    pts.extend(extra.iter().cloned());
    if start < end {
        pts.extend(critical[start..end].iter().cloned());
    }
    let pts = sorted(pts);
    let mut out = Vec::with_capacity(2 * pts.len());
    for w in pts.windows(2) {
        out.push(w[0].clone());
        out.push(w[0].midpoint(&w[1]));
    }
    out.extend(pts.last().cloned());
    out
}

/// One-shot convenience wrapper around [`PointOracle`].
pub fn oracle_eval_at(f: &Formula, tr: &Trace, t: &Rational) -> Result<bool, OracleError> {
    PointOracle::new(f, tr).eval_at(t)
}
