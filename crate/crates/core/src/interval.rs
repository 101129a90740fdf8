//! Rational intervals and canonical interval sets.
//!
//! Every truth set computed by the evaluator is an [`IntervalSet`]: a sorted
//! list of pairwise disjoint, non-adjacent, non-empty intervals. Because the
//! representation is canonical, two sets denote the same points exactly when
//! they are structurally equal, which is what equivalence checking relies on.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("interval {member} is not contained in universe {universe}")]
    MemberOutsideUniverse { member: Interval, universe: Interval },
    #[error("negative window bound {0}")]
    NegativeBound(Rational),
}

/// A non-empty interval of the rational line with per-endpoint closedness.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the described point set is empty.
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Interval { lo, hi, lo_closed, hi_closed }),
            Ordering::Equal if lo_closed && hi_closed => {
                Some(Interval { lo, hi, lo_closed, hi_closed })
            }
            _ => None,
        }
    }

    /// The closed interval `[lo, hi]`.
    ///
    /// # Panics
    ///
    /// Panics if `lo > hi`.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted closed interval [{lo}, {hi}]");
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn point(t: Rational) -> Self {
        Interval::closed(t.clone(), t)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = &self.lo < t || (self.lo_closed && &self.lo == t);
        let below = t < &self.hi || (self.hi_closed && t == &self.hi);
        above && below
    }

    /// Whether every point of `other` lies in `self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        let lo_ok = match self.lo.cmp(&other.lo) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed || !other.lo_closed,
            Ordering::Greater => false,
        };
        let hi_ok = match self.hi.cmp(&other.hi) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed || !other.hi_closed,
            Ordering::Less => false,
        };
        lo_ok && hi_ok
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (&other.lo, other.lo_closed),
            Ordering::Greater => (&self.lo, self.lo_closed),
            Ordering::Equal => (&self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (&self.hi, self.hi_closed),
            Ordering::Greater => (&other.hi, other.hi_closed),
            Ordering::Equal => (&self.hi, self.hi_closed && other.hi_closed),
        };
        Interval::new(lo.clone(), hi.clone(), lo_closed, hi_closed)
    }

    /// A point of the interval: the midpoint, or the sole point of a singleton.
    pub fn witness(&self) -> Rational {
        if self.is_singleton() {
            self.lo.clone()
        } else {
            self.lo.midpoint(&self.hi)
        }
    }

    /// Whether `self ∪ next` is a single interval, assuming `self` starts no
    /// later than `next`.
    fn touches(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }

    /// Ordering by left endpoint, closed before open on ties.
    fn cmp_lo(&self, other: &Interval) -> Ordering {
        self.lo
            .cmp(&other.lo)
            .then_with(|| other.lo_closed.cmp(&self.lo_closed))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which side of `t` an erosion window looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Past,
    Future,
}

/// A canonical finite union of intervals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalSet { intervals: vec![i] }
    }

    /// Union of arbitrary intervals, brought into canonical form.
    pub fn coalesce(raw: impl IntoIterator<Item = Interval>) -> Self {
        let mut raw: Vec<Interval> = raw.into_iter().collect();
        raw.sort_by(Interval::cmp_lo);
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for next in raw {
            match out.last_mut() {
                Some(cur) if cur.touches(&next) => match next.hi.cmp(&cur.hi) {
                    Ordering::Greater => {
                        cur.hi = next.hi;
                        cur.hi_closed = next.hi_closed;
                    }
                    Ordering::Equal => cur.hi_closed |= next.hi_closed,
                    Ordering::Less => {}
                },
                _ => out.push(next),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::coalesce(self.intervals.iter().chain(&other.intervals).cloned())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            if let Some(x) = a[i].intersect(&b[j]) {
                out.push(x);
            }
            // Advance whichever interval ends first.
            let a_first = match a[i].hi.cmp(&b[j].hi) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => !a[i].hi_closed || b[j].hi_closed,
            };
            if a_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of disjoint, non-adjacent inputs cannot touch each other.
        IntervalSet { intervals: out }
    }

    pub fn intersect_interval(&self, other: &Interval) -> IntervalSet {
        let start = self.intervals.partition_point(|m| m.hi < other.lo);
        IntervalSet {
            intervals: self.intervals[start..]
                .iter()
                .take_while(|m| m.lo <= other.hi)
                .filter_map(|m| m.intersect(other))
                .collect(),
        }
    }

    /// `universe \ self`. Every member must lie inside `universe`.
    pub fn complement_within(&self, universe: &Interval) -> Result<IntervalSet, TimeError> {
        if let Some(bad) = self.intervals.iter().find(|m| !universe.contains_interval(m)) {
            return Err(TimeError::MemberOutsideUniverse {
                member: bad.clone(),
                universe: universe.clone(),
            });
        }
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = (universe.lo.clone(), universe.lo_closed);
        for m in &self.intervals {
            out.extend(Interval::new(cursor.0, m.lo.clone(), cursor.1, !m.lo_closed));
            cursor = (m.hi.clone(), !m.hi_closed);
        }
        out.extend(Interval::new(cursor.0, universe.hi.clone(), cursor.1, universe.hi_closed));
        Ok(IntervalSet { intervals: out })
    }

    /// Minkowski sum with the closed interval `[shift_lo, shift_hi]`.
    ///
    /// # Panics
    ///
    /// Panics if `shift_lo > shift_hi`.
    pub fn dilate(&self, shift_lo: &Rational, shift_hi: &Rational) -> IntervalSet {
        assert!(shift_lo <= shift_hi, "inverted shift [{shift_lo}, {shift_hi}]");
        IntervalSet::coalesce(self.intervals.iter().map(|m| Interval {
            lo: &m.lo + shift_lo,
            hi: &m.hi + shift_hi,
            lo_closed: m.lo_closed,
            hi_closed: m.hi_closed,
        }))
    }

    /// Points whose whole window lies inside the set. For `Past` the window
    /// of `t` is `[t - hi, t - lo]`; for `Future` it is `[t + lo, t + hi]`.
    pub fn erode(
        &self,
        lo: &Rational,
        hi: &Rational,
        direction: Direction,
    ) -> Result<IntervalSet, TimeError> {
        if lo.is_negative() {
            return Err(TimeError::NegativeBound(lo.clone()));
        }
        assert!(lo <= hi, "inverted window [{lo}, {hi}]");
        let (shift_a, shift_b) = match direction {
            Direction::Past => (hi.clone(), lo.clone()),
            Direction::Future => (-lo, -hi),
        };
        // A connected window fits inside the set iff it fits in one member,
        // so eroding member-wise is exact and preserves disjointness.
        let intervals = self
            .intervals
            .iter()
            .filter_map(|m| {
                Interval::new(&m.lo + &shift_a, &m.hi + &shift_b, m.lo_closed, m.hi_closed)
            })
            .collect();
        Ok(IntervalSet { intervals })
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.intervals.iter().all(|m| {
            let start = other.intervals.partition_point(|o| o.hi < m.lo);
            other.intervals[start..]
                .iter()
                .take_while(|o| o.lo <= m.lo)
                .any(|o| o.contains_interval(m))
        })
    }

    pub fn contains_point(&self, t: &Rational) -> bool {
        let idx = self.intervals.partition_point(|m| &m.hi < t);
        self.intervals.get(idx).is_some_and(|m| m.contains(t))
    }

    /// The maximal member containing `t`, if any.
    pub fn member_containing(&self, t: &Rational) -> Option<&Interval> {
        let idx = self.intervals.partition_point(|m| &m.hi < t);
        self.intervals.get(idx).filter(|m| m.contains(t))
    }

    pub fn symmetric_difference_within(
        &self,
        other: &IntervalSet,
        universe: &Interval,
    ) -> Result<IntervalSet, TimeError> {
        let a = self.intersect_interval(universe);
        let b = other.intersect_interval(universe);
        let only_a = a.intersect(&b.complement_within(universe)?);
        let only_b = b.intersect(&a.complement_within(universe)?);
        Ok(only_a.union(&only_b))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.intervals.serialize(serializer)
    }
}

impl<'a> IntoIterator for &'a IntervalSet {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;
    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}
