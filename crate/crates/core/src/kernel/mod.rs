//! Proof traces and their checker.
//!
//! A [`ProofTrace`] is a list of steps over a small statement grammar, each
//! tagged with one rule from a closed set. Traces are schematic: variables
//! stand for arbitrary positive integers, so one accepted trace covers every
//! hypothetical pair `(m, n)` at once. [`check_trace`] validates each step
//! syntactically, re-checks concrete arithmetic exactly, and enforces the
//! overall shape of the argument.

mod check;
mod poly;
mod render;
mod term;
mod trace;

pub use check::{check_rule, check_trace, RESIDUE_SCAN_LIMIT};
pub use render::render_text;
pub use term::{Assignment, DegreeClass, Statement, Term, EVAL_BIT_LIMIT};
pub use trace::{CheckResult, ContradictionShape, ProofStep, ProofTrace, RuleTag};
