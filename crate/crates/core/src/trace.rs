//! Finite models: interval-annotated facts over a declared horizon.
//!
//! File format, one item per line:
//!
//! ```text
//! # comment
//! horizon [-5,10]
//! p @ [0,4]
//! q @ [1/2,1/2]
//! ```

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::interval::{Interval, IntervalSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("fact {predicate} @ {span} lies outside horizon {horizon}")]
    FactOutsideHorizon { predicate: String, span: Interval, horizon: Interval },
    #[error("missing horizon line before the first fact")]
    MissingHorizon,
    #[error("horizon {0} must have positive length")]
    DegenerateHorizon(Interval),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub predicate: String,
    pub span: Interval,
}

impl Fact {
    pub fn new(predicate: impl Into<String>, span: Interval) -> Self {
        Fact { predicate: predicate.into(), span }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    horizon: Interval,
    facts: Vec<Fact>,
    bases: BTreeMap<String, IntervalSet>,
}

impl Trace {
    pub fn new(horizon: Interval, facts: Vec<Fact>) -> Result<Self, TraceError> {
        if horizon.is_singleton() {
            return Err(TraceError::DegenerateHorizon(horizon));
        }
        let mut spans: BTreeMap<String, Vec<Interval>> = BTreeMap::new();
        for fact in &facts {
            if !horizon.contains_interval(&fact.span) {
                return Err(TraceError::FactOutsideHorizon {
                    predicate: fact.predicate.clone(),
                    span: fact.span.clone(),
                    horizon,
                });
            }
            spans.entry(fact.predicate.clone()).or_default().push(fact.span.clone());
        }
        let bases = spans
            .into_iter()
            .map(|(p, s)| (p, IntervalSet::coalesce(s)))
            .collect();
        Ok(Trace { horizon, facts, bases })
    }

    pub fn horizon(&self) -> &Interval {
        &self.horizon
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// Coalesced truth set of `predicate`; empty for predicates without facts.
    pub fn truth_base(&self, predicate: &str) -> IntervalSet {
        self.bases.get(predicate).cloned().unwrap_or_default()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.bases.keys().map(String::as_str)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "horizon {}", self.horizon)?;
        for fact in &self.facts {
            writeln!(f, "{} @ {}", fact.predicate, fact.span)?;
        }
        Ok(())
    }
}

fn parse_closed_span(text: &str, line: usize) -> Result<Interval, TraceError> {
    let err = |message: String| TraceError::Syntax { line, message };
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected a closed interval `[a,b]`, found `{}`", text.trim())))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| err(format!("expected `a,b` inside brackets, found `{inner}`")))?;
    let lo: Rational = a.parse().map_err(|e| err(format!("{e}")))?;
    let hi: Rational = b.parse().map_err(|e| err(format!("{e}")))?;
    if lo > hi {
        return Err(err(format!("inverted interval [{lo},{hi}]")));
    }
    Ok(Interval::closed(lo, hi))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-oriented trace format.
pub fn parse_trace(text: &str) -> Result<Trace, TraceError> {
    let mut horizon: Option<Interval> = None;
    let mut facts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let horizon_rest = content
            .strip_prefix("horizon")
            .filter(|rest| rest.starts_with(|c: char| c.is_whitespace() || c == '['));
        if let Some(rest) = horizon_rest {
            if horizon.is_some() {
                return Err(TraceError::Syntax { line, message: "duplicate horizon line".into() });
            }
            horizon = Some(parse_closed_span(rest, line)?);
            continue;
        }
        let (pred, span) = content.split_once('@').ok_or_else(|| TraceError::Syntax {
            line,
            message: format!("expected `IDENT @ [a,b]`, found `{content}`"),
        })?;
        let pred = pred.trim();
        if !is_ident(pred) {
            return Err(TraceError::Syntax { line, message: format!("invalid predicate `{pred}`") });
        }
        if horizon.is_none() {
            return Err(TraceError::MissingHorizon);
        }
        facts.push(Fact::new(pred, parse_closed_span(span, line)?));
    }
    let horizon = horizon.ok_or(TraceError::MissingHorizon)?;
    Trace::new(horizon, facts)
}
