//! Box elimination by directed rewriting.
//!
//! Rules (identifiers as printed in reports):
//!
//! | id       | from                | to                                                              |
//! |----------|---------------------|-----------------------------------------------------------------|
//! | R-DIA-F  | `dplus[I] A`        | `(true U[I] A)`                                                 |
//! | R-DIA-P  | `dminus[I] A`       | `(true S[I] A)`                                                 |
//! | R-BOXF-P | `bplus[i1,i2] A`    | `dplus[i1,i1] (A U[d,d] true)`                                  |
//! | R-BOXP-P | `bminus[i1,i2] A`   | `dminus[i1,i1] (A S[d,d] true)`                                 |
//! | R-BOXF-M | `bplus[i1,i2] A`    | `dplus[m,i1] (A U[d,d+k] true) & dplus[i2,n] (A S[d,d+l] true)` |
//! | R-BOXP-M | `bminus[i1,i2] A`   | `dminus[m,i1] (A S[d,d+l] true) & dminus[i2,n] (A U[d,d+k] true)` |
//!
//! with `d = i2 - i1`, `m = (3*i1 - i2)/2`, `n = (3*i2 - i1)/2` and positive
//! slacks `k` (kappa) and `l` (lambda). The `-M` rules never introduce a
//! singleton window, at the price of requiring `i1 < i2` and `3*i1 >= i2`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Bound, Formula, OpKind};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {rule} does not apply to a {found} node")]
    NotApplicable { rule: &'static str, found: &'static str },
    #[error("singleton box window {0} has no singleton-free rewriting")]
    DegenerateBound(Bound),
    #[error("box window {0} violates 3*i1 >= i2; the rewritten lower bound would be negative")]
    MitlPrecondition(Bound),
    #[error("slack parameters must be positive (kappa = {kappa}, lambda = {lambda})")]
    NonpositiveSlack { kappa: Rational, lambda: Rational },
}

/// A rule failure located at a subformula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {} in `{subformula}`: {source}", display_path(path))]
pub struct NormalizeError {
    pub path: Vec<usize>,
    pub subformula: String,
    pub source: RewriteError,
}

impl NormalizeError {
    pub fn is_precondition(&self) -> bool {
        matches!(
            self.source,
            RewriteError::DegenerateBound(_)
                | RewriteError::MitlPrecondition(_)
                | RewriteError::NonpositiveSlack { .. }
        )
    }
}

pub fn display_path(path: &[usize]) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.iter().map(|k| format!("/{k}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteMode {
    /// Singleton windows allowed.
    Punctual,
    /// No singleton windows. A missing slack defaults, per box, to half the
    /// box width.
    SingletonFree { kappa: Option<Rational>, lambda: Option<Rational> },
}

impl RewriteMode {
    pub fn singleton_free(kappa: Rational, lambda: Rational) -> Self {
        RewriteMode::SingletonFree { kappa: Some(kappa), lambda: Some(lambda) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RewriteMode::Punctual => "punctual",
            RewriteMode::SingletonFree { .. } => "mitl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RuleId {
    #[serde(rename = "R-DIA-P")]
    DiaPast,
    #[serde(rename = "R-DIA-F")]
    DiaFuture,
    #[serde(rename = "R-BOXF-P")]
    BoxFuturePunctual,
    #[serde(rename = "R-BOXP-P")]
    BoxPastPunctual,
    #[serde(rename = "R-BOXF-M")]
    BoxFutureSingletonFree,
    #[serde(rename = "R-BOXP-M")]
    BoxPastSingletonFree,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::DiaPast => "R-DIA-P",
            RuleId::DiaFuture => "R-DIA-F",
            RuleId::BoxFuturePunctual => "R-BOXF-P",
            RuleId::BoxPastPunctual => "R-BOXP-P",
            RuleId::BoxFutureSingletonFree => "R-BOXF-M",
            RuleId::BoxPastSingletonFree => "R-BOXP-M",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One rule firing. `path` addresses the rewritten node in the formula as
/// it was at the time of firing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub path: Vec<usize>,
    /// `(kappa, lambda)` for the singleton-free box rules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<(Rational, Rational)>,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, display_path(&self.path))?;
        if let Some((k, l)) = &self.slack {
            write!(f, " (kappa={k}, lambda={l})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteReport {
    pub input: Formula,
    pub output: Formula,
    pub rules_applied: Vec<RuleApplication>,
}

impl RewriteReport {
    /// Re-applies the recorded rules to the input, one by one.
    pub fn replay(&self) -> Result<Formula, NormalizeError> {
        let mut f = self.input.clone();
        for app in &self.rules_applied {
            let node = f.at_mut(&app.path).expect("recorded path exists");
            let rewritten = match (app.rule, &app.slack) {
                (RuleId::DiaPast | RuleId::DiaFuture, _) => rewrite_diamond(node),
                (RuleId::BoxFuturePunctual | RuleId::BoxPastPunctual, _) => {
                    rewrite_box_punctual(node)
                }
                (_, Some((k, l))) => rewrite_box_singleton_free(node, k, l),
                (_, None) => unreachable!("singleton-free rule recorded without slack"),
            };
            match rewritten {
                Ok(out) => *node = out,
                Err(source) => {
                    return Err(NormalizeError {
                        path: app.path.clone(),
                        subformula: node.to_string(),
                        source,
                    })
                }
            }
        }
        Ok(f)
    }
}

fn bound(i1: Rational, i2: Rational) -> Bound {
    Bound::new(i1, i2).expect("rewrite rules produce well-formed bounds")
}

fn kind_name(f: &Formula) -> &'static str {
    f.kind().name()
}

/// `dplus[I] A  =>  (true U[I] A)` and `dminus[I] A  =>  (true S[I] A)`.
pub fn rewrite_diamond(f: &Formula) -> Result<Formula, RewriteError> {
    match f {
        Formula::DiaPlus(bd, a) => Ok(Formula::until(Formula::Top, bd.clone(), (**a).clone())),
        Formula::DiaMinus(bd, a) => Ok(Formula::since(Formula::Top, bd.clone(), (**a).clone())),
        other => Err(RewriteError::NotApplicable { rule: "R-DIA", found: kind_name(other) }),
    }
}

/// Punctual box elimination.
pub fn rewrite_box_punctual(f: &Formula) -> Result<Formula, RewriteError> {
    box_punctual(f, None)
}

fn box_punctual(f: &Formula, fault: Option<Fault>) -> Result<Formula, RewriteError> {
    match f {
        Formula::BoxPlus(bd, a) => {
            let jump = bound(bd.width(), bd.width());
            let outer = match fault {
                Some(Fault::PunctualFutureOuterAtUpperBound) => bd.i2().clone(),
                None => bd.i1().clone(),
            };
            Ok(Formula::dia_plus(
                bound(outer.clone(), outer),
                Formula::until((**a).clone(), jump, Formula::Top),
            ))
        }
        Formula::BoxMinus(bd, a) => Ok(Formula::dia_minus(
            bound(bd.i1().clone(), bd.i1().clone()),
            Formula::since((**a).clone(), bound(bd.width(), bd.width()), Formula::Top),
        )),
        other => Err(RewriteError::NotApplicable { rule: "R-BOX-P", found: kind_name(other) }),
    }
}

/// Singleton-free box elimination with slack parameters `kappa` (for the
/// until jump) and `lambda` (for the since jump).
pub fn rewrite_box_singleton_free(
    f: &Formula,
    kappa: &Rational,
    lambda: &Rational,
) -> Result<Formula, RewriteError> {
    let (bd, a, future) = match f {
        Formula::BoxPlus(bd, a) => (bd, a, true),
        Formula::BoxMinus(bd, a) => (bd, a, false),
        other => {
            return Err(RewriteError::NotApplicable { rule: "R-BOX-M", found: kind_name(other) })
        }
    };
    if !kappa.is_positive() || !lambda.is_positive() {
        return Err(RewriteError::NonpositiveSlack { kappa: kappa.clone(), lambda: lambda.clone() });
    }
    if bd.is_singleton() {
        return Err(RewriteError::DegenerateBound(bd.clone()));
    }
    let (i1, i2) = (bd.i1(), bd.i2());
    let three = Rational::from_integer(3);
    let two = Rational::from_integer(2);
    let near_lo = (&three * i1 - i2) / two.clone();
    if near_lo.is_negative() {
        return Err(RewriteError::MitlPrecondition(bd.clone()));
    }
    let far_hi = (&three * i2 - i1) / two;
    let width = bd.width();
    let until_jump = Formula::until((**a).clone(), bound(width.clone(), &width + kappa), Formula::Top);
    let since_jump = Formula::since((**a).clone(), bound(width.clone(), &width + lambda), Formula::Top);
    let near = bound(near_lo, i1.clone());
    let far = bound(i2.clone(), far_hi);
    Ok(if future {
        Formula::and(Formula::dia_plus(near, until_jump), Formula::dia_plus(far, since_jump))
    } else {
        Formula::and(Formula::dia_minus(near, since_jump), Formula::dia_minus(far, until_jump))
    })
}

/// Deliberate rule corruptions, used only to prove that equivalence
/// campaigns are able to fail.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// R-BOXF-P jumps to `t + i2` instead of `t + i1` before checking `A`.
    PunctualFutureOuterAtUpperBound,
}

/// Bottom-up normalizer to the since/until core.
#[derive(Debug, Clone)]
pub struct Rewriter {
    mode: RewriteMode,
    fault: Option<Fault>,
}

impl Rewriter {
    pub fn new(mode: RewriteMode) -> Self {
        Rewriter { mode, fault: None }
    }

    #[doc(hidden)]
    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn mode(&self) -> &RewriteMode {
        &self.mode
    }

    /// Same rewriter (including any fault) under another mode.
    pub fn with_mode(&self, mode: RewriteMode) -> Self {
        Rewriter { mode, fault: self.fault }
    }

    pub fn normalize(&self, f: &Formula) -> Result<RewriteReport, NormalizeError> {
        let mut rules = Vec::new();
        let mut path = Vec::new();
        let output = self.visit(f, &mut path, &mut rules)?;
        Ok(RewriteReport { input: f.clone(), output, rules_applied: rules })
    }

    fn visit(
        &self,
        f: &Formula,
        path: &mut Vec<usize>,
        rules: &mut Vec<RuleApplication>,
    ) -> Result<Formula, NormalizeError> {
        // Negated subtrees are left exactly as written.
        if matches!(f, Formula::Not(_)) {
            return Ok(f.clone());
        }
        let mut node = f.clone();
        for k in 0..f.children().len() {
            path.push(k);
            let child = self.visit(f.children()[k], path, rules)?;
            path.pop();
            *node.child_mut(k).expect("child index in range") = child;
        }
        let located = |source, sub: &Formula| NormalizeError {
            path: path.clone(),
            subformula: sub.to_string(),
            source,
        };
        match node.kind() {
            OpKind::BoxPlus | OpKind::BoxMinus => {
                let future = node.kind() == OpKind::BoxPlus;
                match &self.mode {
                    RewriteMode::Punctual => {
                        let out = box_punctual(&node, self.fault).map_err(|e| located(e, &node))?;
                        rules.push(RuleApplication {
                            rule: if future {
                                RuleId::BoxFuturePunctual
                            } else {
                                RuleId::BoxPastPunctual
                            },
                            path: path.clone(),
                            slack: None,
                        });
                        self.diamond_at(out, path, rules)
                    }
                    RewriteMode::SingletonFree { kappa, lambda } => {
                        let half = node.bound().expect("box has a bound").width()
                            / Rational::from_integer(2);
                        let kappa = kappa.clone().unwrap_or_else(|| half.clone());
                        let lambda = lambda.clone().unwrap_or(half);
                        let out = rewrite_box_singleton_free(&node, &kappa, &lambda)
                            .map_err(|e| located(e, &node))?;
                        rules.push(RuleApplication {
                            rule: if future {
                                RuleId::BoxFutureSingletonFree
                            } else {
                                RuleId::BoxPastSingletonFree
                            },
                            path: path.clone(),
                            slack: Some((kappa, lambda)),
                        });
                        let Formula::And(near, far) = out else {
                            unreachable!("singleton-free rule yields a conjunction")
                        };
                        path.push(0);
                        let near = self.diamond_at(*near, path, rules)?;
                        path.pop();
                        path.push(1);
                        let far = self.diamond_at(*far, path, rules)?;
                        path.pop();
                        Ok(Formula::and(near, far))
                    }
                }
            }
            OpKind::DiaPlus | OpKind::DiaMinus => self.diamond_at(node, path, rules),
            _ => Ok(node),
        }
    }

    fn diamond_at(
        &self,
        f: Formula,
        path: &[usize],
        rules: &mut Vec<RuleApplication>,
    ) -> Result<Formula, NormalizeError> {
        let rule = match f.kind() {
            OpKind::DiaPlus => RuleId::DiaFuture,
            _ => RuleId::DiaPast,
        };
        let out = rewrite_diamond(&f).map_err(|source| NormalizeError {
            path: path.to_vec(),
            subformula: f.to_string(),
            source,
        })?;
        rules.push(RuleApplication { rule, path: path.to_vec(), slack: None });
        Ok(out)
    }
}

/// Normalizes `f` to since/until form under `mode`.
pub fn normalize(f: &Formula, mode: &RewriteMode) -> Result<RewriteReport, NormalizeError> {
    Rewriter::new(mode.clone()).normalize(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::rational::q;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn one() -> Rational {
        q(1, 1)
    }

    #[test]
    fn diamond_rule() {
        assert_eq!(rewrite_diamond(&p("dplus[1,2] p")).unwrap(), p("(true U[1,2] p)"));
        assert_eq!(rewrite_diamond(&p("dminus[0,5] p")).unwrap(), p("(true S[0,5] p)"));
        assert_eq!(rewrite_diamond(&p("dminus[0,0] p")).unwrap(), p("(true S[0,0] p)"));
        assert!(matches!(
            rewrite_diamond(&p("bplus[0,1] p")),
            Err(RewriteError::NotApplicable { .. })
        ));
    }

    #[test]
    fn punctual_box_rules() {
        assert_eq!(
            rewrite_box_punctual(&p("bplus[1,3] p")).unwrap(),
            p("dplus[1,1] (p U[2,2] true)")
        );
        assert_eq!(
            rewrite_box_punctual(&p("bminus[1,3] p")).unwrap(),
            p("dminus[1,1] (p S[2,2] true)")
        );
        assert_eq!(
            rewrite_box_punctual(&p("bplus[2,2] p")).unwrap(),
            p("dplus[2,2] (p U[0,0] true)")
        );
        assert!(rewrite_box_punctual(&p("p")).is_err());
    }

    #[test]
    fn singleton_free_box_rules() {
        assert_eq!(
            rewrite_box_singleton_free(&p("bplus[2,4] p"), &one(), &one()).unwrap(),
            p("dplus[1,2] (p U[2,3] true) & dplus[4,5] (p S[2,3] true)")
        );
        assert_eq!(
            rewrite_box_singleton_free(&p("bminus[2,4] p"), &one(), &one()).unwrap(),
            p("dminus[1,2] (p S[2,3] true) & dminus[4,5] (p U[2,3] true)")
        );
    }

    #[test]
    fn singleton_free_preconditions() {
        let err = rewrite_box_singleton_free(&p("bplus[1,4] p"), &one(), &one()).unwrap_err();
        assert!(matches!(err, RewriteError::MitlPrecondition(_)));
        let err = rewrite_box_singleton_free(&p("bplus[2,2] p"), &one(), &one()).unwrap_err();
        assert!(matches!(err, RewriteError::DegenerateBound(_)));
        let err = rewrite_box_singleton_free(&p("bplus[2,4] p"), &q(0, 1), &one()).unwrap_err();
        assert!(matches!(err, RewriteError::NonpositiveSlack { .. }));
        let err = rewrite_box_singleton_free(&p("dplus[2,4] p"), &one(), &one()).unwrap_err();
        assert!(matches!(err, RewriteError::NotApplicable { .. }));
        // Boundary case 3*i1 == i2 is accepted with a zero lower bound.
        let out = rewrite_box_singleton_free(&p("bplus[1,3] p"), &one(), &one()).unwrap();
        assert_eq!(out, p("dplus[0,1] (p U[2,3] true) & dplus[3,4] (p S[2,3] true)"));
    }

    #[test]
    fn normalize_punctual() {
        let r = normalize(&p("bplus[1,3] p"), &RewriteMode::Punctual).unwrap();
        assert_eq!(r.output, p("(true U[1,1] (p U[2,2] true))"));
        let ids: Vec<_> = r.rules_applied.iter().map(|a| a.rule).collect();
        assert_eq!(ids, [RuleId::BoxFuturePunctual, RuleId::DiaFuture]);

        let r = normalize(&p("dminus[1,2] bminus[1,3] p"), &RewriteMode::Punctual).unwrap();
        assert_eq!(r.output, p("(true S[1,2] (true S[1,1] (p S[2,2] true)))"));
        assert_eq!(r.replay().unwrap(), r.output);
    }

    #[test]
    fn normalize_singleton_free() {
        let mode = RewriteMode::singleton_free(one(), one());
        let r = normalize(&p("bplus[2,4] p"), &mode).unwrap();
        assert_eq!(
            r.output.to_string(),
            "((true U[1,2] (p U[2,3] true)) & (true U[4,5] (p S[2,3] true)))"
        );
        assert_eq!(r.replay().unwrap(), r.output);
        let paths: Vec<_> = r.rules_applied.iter().map(|a| display_path(&a.path)).collect();
        assert_eq!(paths, ["/", "/0", "/1"]);
    }

    #[test]
    fn default_slack_is_half_width() {
        let mode = RewriteMode::SingletonFree { kappa: None, lambda: None };
        let r = normalize(&p("bplus[2,4] p"), &mode).unwrap();
        assert_eq!(r.rules_applied[0].slack, Some((one(), one())));
    }

    #[test]
    fn normalize_errors_are_located() {
        let mode = RewriteMode::singleton_free(one(), one());
        let err = normalize(&p("q & dplus[0,1] bplus[1,4] p"), &mode).unwrap_err();
        assert_eq!(err.path, vec![1, 0]);
        assert!(err.is_precondition());
        assert_eq!(err.subformula, "bplus[1,4] p");
    }

    #[test]
    fn noop_and_negation_passthrough() {
        for mode in [RewriteMode::Punctual, RewriteMode::singleton_free(one(), one())] {
            let r = normalize(&p("p"), &mode).unwrap();
            assert_eq!(r.output, p("p"));
            assert!(r.rules_applied.is_empty());
        }
        let r = normalize(&p("!bplus[1,2] p & dplus[0,1] q"), &RewriteMode::Punctual).unwrap();
        assert_eq!(r.output, p("!bplus[1,2] p & (true U[0,1] q)"));
    }

    #[test]
    fn fault_changes_output() {
        let f = p("bplus[1,3] p");
        let bad = Rewriter::new(RewriteMode::Punctual)
            .with_fault(Fault::PunctualFutureOuterAtUpperBound)
            .normalize(&f)
            .unwrap();
        assert_eq!(bad.output, p("(true U[3,3] (p U[2,2] true))"));
    }
}
