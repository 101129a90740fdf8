//! Bounded metric temporal logic over dense rational time.
//!
//! The crate provides:
//!
//! * exact rational time ([`Rational`]) and canonical interval sets
//!   ([`IntervalSet`]) with the dilation and erosion operators that realize
//!   the temporal windows;
//! * a formula AST with a parser, printer and structural analyses
//!   ([`formula`]);
//! * finite traces ([`trace`]), an exact truth-set evaluator ([`eval`]) and
//!   an independent point-wise reference evaluator ([`oracle`]);
//! * rewriting of "always" and "once" operators into since/until form
//!   ([`rewrite`]);
//! * seeded generators and equivalence campaigns ([`harness`]).

// Error payloads carry exact rationals; boxing them buys nothing here.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod eval;
pub mod formula;
pub mod harness;
pub mod interval;
pub mod oracle;
pub mod rational;
pub mod rewrite;
pub mod trace;

pub use eval::{eval_truth_set, reliable_region, ReliableRegion};
pub use formula::{parse_formula, Bound, Census, Formula, FormulaError, OpKind, Reach};
pub use interval::{Direction, Interval, IntervalSet, TimeError};
pub use oracle::{oracle_eval_at, OracleError, PointOracle};
pub use rational::Rational;
pub use rewrite::{
    normalize, rewrite_box_punctual, rewrite_box_singleton_free, rewrite_diamond, NormalizeError,
    RewriteError, RewriteMode, RewriteReport, Rewriter, RuleApplication, RuleId,
};
pub use trace::{parse_trace, Fact, Trace, TraceError};
