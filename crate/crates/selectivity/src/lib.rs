//! Selector functions over bounded-length binary-string universes.
//!
//! A selector is a 2-ary, possibly partial, possibly multivalued function `f`
//! whose value on `(x, y)` is a subset of `{x, y}`. A selector *for* a target
//! set `B` must, whenever `x` or `y` lies in `B`, return a nonempty subset of
//! `B`. This crate builds such functions over universes of binary strings of
//! bounded length, transforms them (commutativization, associativization,
//! score- and gap-based reconstruction, order merging), analyzes the digraphs
//! they induce, and extracts short advice words and small cover witnesses
//! from them. Everything is deterministic: the only randomness is a seeded
//! generator used for subset sampling in large equivalence checks.

#![forbid(unsafe_code)]

pub mod advice;
pub mod digraph;
pub mod functions;
pub mod report;
pub mod samples;
pub mod transforms;
pub mod universe;
pub mod witness;

pub use functions::{MultiMap, TargetSet, ValueSet};
pub use report::{AgreementReport, PropertyReport, Witness};
pub use universe::{PairCode, Universe, Word};

/// Default work budget: ops that would evaluate more pairs than this refuse.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Errors shared by every module.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A word is longer than the universe allows.
    #[error("word {word} exceeds universe max length {max_len}")]
    OutOfUniverse { word: Word, max_len: u8 },
    /// Malformed input or an out-of-range request.
    #[error("{op}: {reason}")]
    Invalid { op: &'static str, reason: String },
    /// A checked precondition failed; the report carries the witness.
    #[error("{op}: precondition failed: {}", report.one_line())]
    Precondition {
        op: &'static str,
        report: Box<PropertyReport>,
    },
    /// Estimated work exceeds the configured budget.
    #[error("{op}: estimated work {needed} exceeds budget {budget}")]
    Budget { op: &'static str, needed: u64, budget: u64 },
    /// An invariant the library itself promises was violated.
    #[error("{op}: internal invariant violated: {reason}")]
    Internal { op: &'static str, reason: String },
}

impl Error {
    pub fn invalid(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { op, reason: reason.into() }
    }

    pub fn internal(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Internal { op, reason: reason.into() }
    }

    pub fn precondition(op: &'static str, report: PropertyReport) -> Self {
        Error::Precondition { op, report: Box::new(report) }
    }

    /// The report behind a precondition failure, if that is what this is.
    pub fn precondition_report(&self) -> Option<&PropertyReport> {
        match self {
            Error::Precondition { report, .. } => Some(report),
            _ => None,
        }
    }
}
