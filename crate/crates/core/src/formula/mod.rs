//! Abstract syntax for bounded MTL, with printing and structural analyses.

mod parse;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rational::Rational;

pub use parse::parse_formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("negative bound [{i1},{i2}] at {line}:{column}")]
    NegativeBound { i1: Rational, i2: Rational, line: usize, column: usize },
    #[error("inverted bound [{i1},{i2}] at {line}:{column}")]
    InvertedBound { i1: Rational, i2: Rational, line: usize, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("negative bound [{0},{1}]")]
    Negative(Rational, Rational),
    #[error("inverted bound [{0},{1}]")]
    Inverted(Rational, Rational),
}

/// The closed window `[i1, i2]` of a temporal operator, `0 <= i1 <= i2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bound {
    i1: Rational,
    i2: Rational,
}

impl Bound {
    pub fn new(i1: Rational, i2: Rational) -> Result<Self, BoundError> {
        if i1.is_negative() || i2.is_negative() {
            return Err(BoundError::Negative(i1, i2));
        }
        if i1 > i2 {
            return Err(BoundError::Inverted(i1, i2));
        }
        Ok(Bound { i1, i2 })
    }

    pub fn singleton(i: Rational) -> Result<Self, BoundError> {
        Bound::new(i.clone(), i)
    }

    pub fn i1(&self) -> &Rational {
        &self.i1
    }

    pub fn i2(&self) -> &Rational {
        &self.i2
    }

    pub fn width(&self) -> Rational {
        &self.i2 - &self.i1
    }

    pub fn is_singleton(&self) -> bool {
        self.i1 == self.i2
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.i1, self.i2)
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Pred(String),
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Always, future window.
    BoxPlus(Bound, Box<Formula>),
    /// Always, past window.
    BoxMinus(Bound, Box<Formula>),
    /// Once, future window.
    DiaPlus(Bound, Box<Formula>),
    /// Once, past window.
    DiaMinus(Bound, Box<Formula>),
    Since(Box<Formula>, Bound, Box<Formula>),
    Until(Box<Formula>, Bound, Box<Formula>),
}

/// Operator kinds, in the order used by [`Census`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OpKind {
    Pred,
    Top,
    Not,
    And,
    BoxPlus,
    BoxMinus,
    DiaPlus,
    DiaMinus,
    Since,
    Until,
}

impl OpKind {
    pub const ALL: [OpKind; 10] = [
        OpKind::Pred,
        OpKind::Top,
        OpKind::Not,
        OpKind::And,
        OpKind::BoxPlus,
        OpKind::BoxMinus,
        OpKind::DiaPlus,
        OpKind::DiaMinus,
        OpKind::Since,
        OpKind::Until,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Pred => "Pred",
            OpKind::Top => "Top",
            OpKind::Not => "Not",
            OpKind::And => "And",
            OpKind::BoxPlus => "BoxPlus",
            OpKind::BoxMinus => "BoxMinus",
            OpKind::DiaPlus => "DiaPlus",
            OpKind::DiaMinus => "DiaMinus",
            OpKind::Since => "Since",
            OpKind::Until => "Until",
        }
    }
}

impl Formula {
    pub fn pred(name: impl Into<String>) -> Self {
        Formula::Pred(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn box_plus(b: Bound, f: Formula) -> Self {
        Formula::BoxPlus(b, Box::new(f))
    }

    pub fn box_minus(b: Bound, f: Formula) -> Self {
        Formula::BoxMinus(b, Box::new(f))
    }

    pub fn dia_plus(b: Bound, f: Formula) -> Self {
        Formula::DiaPlus(b, Box::new(f))
    }

    pub fn dia_minus(b: Bound, f: Formula) -> Self {
        Formula::DiaMinus(b, Box::new(f))
    }

    pub fn since(a: Formula, b: Bound, c: Formula) -> Self {
        Formula::Since(Box::new(a), b, Box::new(c))
    }

    pub fn until(a: Formula, b: Bound, c: Formula) -> Self {
        Formula::Until(Box::new(a), b, Box::new(c))
    }

    pub fn kind(&self) -> OpKind {
        match self {
            Formula::Pred(_) => OpKind::Pred,
            Formula::Top => OpKind::Top,
            Formula::Not(_) => OpKind::Not,
            Formula::And(..) => OpKind::And,
            Formula::BoxPlus(..) => OpKind::BoxPlus,
            Formula::BoxMinus(..) => OpKind::BoxMinus,
            Formula::DiaPlus(..) => OpKind::DiaPlus,
            Formula::DiaMinus(..) => OpKind::DiaMinus,
            Formula::Since(..) => OpKind::Since,
            Formula::Until(..) => OpKind::Until,
        }
    }

    pub fn bound(&self) -> Option<&Bound> {
        match self {
            Formula::BoxPlus(b, _)
            | Formula::BoxMinus(b, _)
            | Formula::DiaPlus(b, _)
            | Formula::DiaMinus(b, _)
            | Formula::Since(_, b, _)
            | Formula::Until(_, b, _) => Some(b),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Pred(_) | Formula::Top => vec![],
            Formula::Not(a)
            | Formula::BoxPlus(_, a)
            | Formula::BoxMinus(_, a)
            | Formula::DiaPlus(_, a)
            | Formula::DiaMinus(_, a) => vec![a],
            Formula::And(a, b) | Formula::Since(a, _, b) | Formula::Until(a, _, b) => vec![a, b],
        }
    }

    pub fn child_mut(&mut self, index: usize) -> Option<&mut Formula> {
        match (self, index) {
            (
                Formula::Not(a)
                | Formula::BoxPlus(_, a)
                | Formula::BoxMinus(_, a)
                | Formula::DiaPlus(_, a)
                | Formula::DiaMinus(_, a),
                0,
            ) => Some(a),
            (Formula::And(a, _) | Formula::Since(a, _, _) | Formula::Until(a, _, _), 0) => Some(a),
            (Formula::And(_, b) | Formula::Since(_, _, b) | Formula::Until(_, _, b), 1) => Some(b),
            _ => None,
        }
    }

    /// Subformula at a path of child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Formula> {
        path.iter().try_fold(self, |f, &k| f.children().get(k).copied())
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Formula> {
        path.iter().try_fold(self, |f, &k| f.child_mut(k))
    }

    /// Pre-order iterator over all subformulas, including `self`.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            stack.extend(f.children().into_iter().rev());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    /// Nesting depth of temporal operators only.
    pub fn temporal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.temporal_depth()).max().unwrap_or(0);
        inner + usize::from(self.bound().is_some())
    }

    pub fn is_negation_free(&self) -> bool {
        self.subformulas().iter().all(|f| !matches!(f, Formula::Not(_)))
    }

    pub fn bounds(&self) -> Vec<&Bound> {
        self.subformulas().into_iter().filter_map(|f| f.bound()).collect()
    }

    pub fn census(&self) -> Census {
        let mut counts = [0usize; 10];
        for f in self.subformulas() {
            counts[f.kind() as usize] += 1;
        }
        Census {
            counts,
            has_singleton_bound: self.bounds().iter().any(|b| b.is_singleton()),
            max_depth: self.depth(),
        }
    }

    /// Over-approximation of how far into the past and the future the truth
    /// value at `t` can depend on the model.
    pub fn temporal_reach(&self) -> Reach {
        let zero = Rational::zero;
        match self {
            Formula::Pred(_) | Formula::Top => Reach { past: zero(), future: zero() },
            Formula::Not(a) => a.temporal_reach(),
            Formula::And(a, b) => a.temporal_reach().max(&b.temporal_reach()),
            Formula::DiaMinus(bd, a) | Formula::BoxMinus(bd, a) => {
                let r = a.temporal_reach();
                Reach { past: bd.i2() + &r.past, future: r.future }
            }
            Formula::DiaPlus(bd, a) | Formula::BoxPlus(bd, a) => {
                let r = a.temporal_reach();
                Reach { past: r.past, future: bd.i2() + &r.future }
            }
            Formula::Since(a, bd, b) => {
                let r = a.temporal_reach().max(&b.temporal_reach());
                Reach { past: bd.i2() + &r.past, future: r.future }
            }
            Formula::Until(a, bd, b) => {
                let r = a.temporal_reach().max(&b.temporal_reach());
                Reach { past: r.past, future: bd.i2() + &r.future }
            }
        }
    }

    /// Parenthesized prefix form, e.g. `(bplus [1,3] (pred p))`.
    pub fn to_sexpr(&self) -> String {
        match self {
            Formula::Pred(p) => format!("(pred {p})"),
            Formula::Top => "(true)".to_string(),
            Formula::Not(a) => format!("(not {})", a.to_sexpr()),
            Formula::And(a, b) => format!("(and {} {})", a.to_sexpr(), b.to_sexpr()),
            Formula::BoxPlus(bd, a) => format!("(bplus {bd} {})", a.to_sexpr()),
            Formula::BoxMinus(bd, a) => format!("(bminus {bd} {})", a.to_sexpr()),
            Formula::DiaPlus(bd, a) => format!("(dplus {bd} {})", a.to_sexpr()),
            Formula::DiaMinus(bd, a) => format!("(dminus {bd} {})", a.to_sexpr()),
            Formula::Since(a, bd, b) => format!("(since {} {bd} {})", a.to_sexpr(), b.to_sexpr()),
            Formula::Until(a, bd, b) => format!("(until {} {bd} {})", a.to_sexpr(), b.to_sexpr()),
        }
    }
}

/// Concrete syntax accepted by [`parse_formula`]. Conjunctions and binary
/// temporal operators are always parenthesized.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred(p) => f.write_str(p),
            Formula::Top => f.write_str("true"),
            Formula::Not(a) => write!(f, "!{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::BoxPlus(bd, a) => write!(f, "bplus{bd} {a}"),
            Formula::BoxMinus(bd, a) => write!(f, "bminus{bd} {a}"),
            Formula::DiaPlus(bd, a) => write!(f, "dplus{bd} {a}"),
            Formula::DiaMinus(bd, a) => write!(f, "dminus{bd} {a}"),
            Formula::Since(a, bd, b) => write!(f, "({a} S{bd} {b})"),
            Formula::Until(a, bd, b) => write!(f, "({a} U{bd} {b})"),
        }
    }
}

/// Past and future temporal reach of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reach {
    pub past: Rational,
    pub future: Rational,
}

impl Reach {
    pub fn max(&self, other: &Reach) -> Reach {
        Reach {
            past: self.past.clone().max(other.past.clone()),
            future: self.future.clone().max(other.future.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    counts: [usize; 10],
    pub has_singleton_bound: bool,
    pub max_depth: usize,
}

impl Census {
    pub fn count(&self, kind: OpKind) -> usize {
        self.counts[kind as usize]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Operator kinds with a non-zero count.
    pub fn kinds(&self) -> Vec<OpKind> {
        OpKind::ALL.into_iter().filter(|&k| self.count(k) > 0).collect()
    }

    pub fn is_negation_free(&self) -> bool {
        self.count(OpKind::Not) == 0
    }
}

impl Serialize for Census {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(13))?;
        for k in OpKind::ALL {
            map.serialize_entry(k.name(), &self.count(k))?;
        }
        map.serialize_entry("has_singleton_bound", &self.has_singleton_bound)?;
        map.serialize_entry("max_depth", &self.max_depth)?;
        map.serialize_entry("negation_free", &self.is_negation_free())?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn b(i1: i64, i2: i64) -> Bound {
        Bound::new(q(i1, 1), q(i2, 1)).unwrap()
    }

    #[test]
    fn bound_validation() {
        assert!(matches!(Bound::new(q(2, 1), q(1, 1)), Err(BoundError::Inverted(..))));
        assert!(matches!(Bound::new(q(-1, 1), q(1, 1)), Err(BoundError::Negative(..))));
        assert!(Bound::new(q(0, 1), q(0, 1)).unwrap().is_singleton());
    }

    #[test]
    fn census_until_chain() {
        let f = Formula::until(
            Formula::Top,
            b(1, 1),
            Formula::until(Formula::pred("p"), b(2, 2), Formula::Top),
        );
        let c = f.census();
        assert_eq!(c.count(OpKind::Until), 2);
        assert_eq!(c.count(OpKind::Top), 2);
        assert_eq!(c.count(OpKind::Pred), 1);
        assert_eq!(c.total(), 5);
        assert!(c.has_singleton_bound);
        assert_eq!(c.max_depth, 2);
    }

    #[test]
    fn census_atoms_and_boxes() {
        let c = Formula::pred("p").census();
        assert_eq!(c.count(OpKind::Pred), 1);
        assert_eq!(c.total(), 1);
        assert!(!c.has_singleton_bound);

        let c = Formula::box_plus(b(1, 3), Formula::pred("p")).census();
        assert_eq!(c.count(OpKind::BoxPlus), 1);
        assert_eq!(c.count(OpKind::Pred), 1);
        assert!(!c.has_singleton_bound);
    }

    #[test]
    fn negation_freeness_matches_census() {
        let f = Formula::and(Formula::pred("p"), Formula::not(Formula::pred("q")));
        assert!(!f.is_negation_free());
        assert_eq!(f.census().count(OpKind::Not), 1);
        assert!(Formula::pred("p").is_negation_free());
    }

    #[test]
    fn reach_examples() {
        let r = Formula::pred("p").temporal_reach();
        assert_eq!((r.past, r.future), (q(0, 1), q(0, 1)));
        let r = Formula::box_plus(b(1, 3), Formula::pred("p")).temporal_reach();
        assert_eq!((r.past, r.future), (q(0, 1), q(3, 1)));
        let f = Formula::dia_minus(b(1, 2), Formula::dia_plus(b(0, 1), Formula::pred("p")));
        let r = f.temporal_reach();
        assert_eq!((r.past, r.future), (q(2, 1), q(1, 1)));
    }

    #[test]
    fn paths() {
        let mut f = Formula::since(Formula::pred("a"), b(0, 1), Formula::not(Formula::pred("c")));
        assert_eq!(f.at(&[1, 0]), Some(&Formula::pred("c")));
        assert_eq!(f.at(&[2]), None);
        *f.at_mut(&[0]).unwrap() = Formula::Top;
        assert_eq!(f.to_string(), "(true S[0,1] !c)");
    }

    #[test]
    fn sexpr() {
        let f = Formula::box_plus(b(1, 3), Formula::pred("p"));
        assert_eq!(f.to_sexpr(), "(bplus [1,3] (pred p))");
        let f = Formula::until(Formula::pred("p"), b(1, 2), Formula::pred("q"));
        assert_eq!(f.to_sexpr(), "(until (pred p) [1,2] (pred q))");
    }
}
