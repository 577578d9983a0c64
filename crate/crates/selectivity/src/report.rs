//! Property reports: pass/fail verdicts that carry re-checkable witnesses.

use std::fmt;

use crate::universe::Word;

/// Outcome of checking one property of one subject.
///
/// A failing report always carries a witness; re-evaluating the witness
/// against the same subject reproduces the violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    /// Name of the property checked, e.g. "associative-on".
    pub property: &'static str,
    /// Name of the subject (function or graph) the check ran against.
    pub subject: String,
    pub pass: bool,
    /// Pairs evaluated during the check.
    pub pairs_checked: u64,
    /// Triples evaluated during the check.
    pub triples_checked: u64,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn pass(property: &'static str, subject: &str, pairs: u64, triples: u64) -> Self {
        PropertyReport {
            property,
            subject: subject.to_string(),
            pass: true,
            pairs_checked: pairs,
            triples_checked: triples,
            witness: None,
        }
    }

    pub fn fail(
        property: &'static str,
        subject: &str,
        pairs: u64,
        triples: u64,
        witness: Witness,
    ) -> Self {
        PropertyReport {
            property,
            subject: subject.to_string(),
            pass: false,
            pairs_checked: pairs,
            triples_checked: triples,
            witness: Some(witness),
        }
    }

    /// Compact single-line rendering, stable across runs.
    pub fn one_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut s = format!(
            "prop={} subject={} verdict={} pairs={} triples={}",
            self.property, self.subject, verdict, self.pairs_checked, self.triples_checked
        );
        if let Some(w) = &self.witness {
            s.push_str(&format!(" witness={w}"));
        }
        s
    }
}

/// Several independently computed verdicts that are expected to agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    /// One verdict per independently evaluated condition, in fixed order.
    pub verdicts: Vec<bool>,
    /// pass = all verdicts equal; witness describes the first split found.
    pub report: PropertyReport,
}

/// Concrete evidence for a failed property check.
///
/// Value sets are stored as sorted word lists so they can be compared and
/// re-evaluated without the original check context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// f(x, y) is undefined (empty) where the property needs a value.
    UndefinedPair { x: Word, y: Word },
    /// f(x, y) has two members where a single value was required.
    MultiValued { x: Word, y: Word, value: Vec<Word> },
    /// set-f(x, y) differs from set-f(y, x).
    NotCommutative { x: Word, y: Word, xy: Vec<Word>, yx: Vec<Word> },
    /// set-f(a, set-f(b, c)) differs from set-f(set-f(a, b), c).
    AssocBreach { a: Word, b: Word, c: Word, left: Vec<Word>, right: Vec<Word> },
    /// {x, y} meets the target set but the value is empty or strays outside it.
    SelectorBreach { x: Word, y: Word, value: Vec<Word> },
    /// Same length, member below a nonmember in lex order.
    NotMonotone { member: Word, nonmember: Word },
    /// A member's length lies outside the allowed length set.
    LengthOutside { w: Word },
    /// Edges (a,b) and (b,c) present but (a,c) missing.
    EdgeBreach { a: Word, b: Word, c: Word },
    /// Neither direction present between two distinct vertices.
    MissingEdge { x: Word, y: Word },
    /// Both directions present where exactly one was required.
    MutualEdge { x: Word, y: Word },
    /// Required self-loop absent.
    MissingLoop { w: Word },
    /// Advice decoding disagreed with target membership at x.
    DecodeMismatch { x: Word, advice: Word, expected: bool },
    /// Independently computed routes disagree; text names them and the split.
    Split { what: String },
    /// A violation localized to a single word length.
    AtLength { n: u8, inner: Box<Witness> },
}

/// Renders a sorted word list as `{w,w,...}`, empty set as `{}`.
pub fn fmt_words(words: &[Word]) -> String {
    let mut s = String::from("{");
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&w.to_string());
    }
    s.push('}');
    s
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::UndefinedPair { x, y } => write!(f, "undefined(x={x},y={y})"),
            Witness::MultiValued { x, y, value } => {
                write!(f, "multivalued(x={x},y={y},value={})", fmt_words(value))
            }
            Witness::NotCommutative { x, y, xy, yx } => write!(
                f,
                "noncommutative(x={x},y={y},xy={},yx={})",
                fmt_words(xy),
                fmt_words(yx)
            ),
            Witness::AssocBreach { a, b, c, left, right } => write!(
                f,
                "assoc(a={a},b={b},c={c},left={},right={})",
                fmt_words(left),
                fmt_words(right)
            ),
            Witness::SelectorBreach { x, y, value } => {
                write!(f, "selector(x={x},y={y},value={})", fmt_words(value))
            }
            Witness::NotMonotone { member, nonmember } => {
                write!(f, "nonmonotone(member={member},nonmember={nonmember})")
            }
            Witness::LengthOutside { w } => write!(f, "length-outside(w={w})"),
            Witness::EdgeBreach { a, b, c } => write!(f, "edge-breach(a={a},b={b},c={c})"),
            Witness::MissingEdge { x, y } => write!(f, "missing-edge(x={x},y={y})"),
            Witness::MutualEdge { x, y } => write!(f, "mutual-edge(x={x},y={y})"),
            Witness::MissingLoop { w } => write!(f, "missing-loop(w={w})"),
            Witness::DecodeMismatch { x, advice, expected } => {
                write!(f, "decode(x={x},advice={advice},expected={expected})")
            }
            Witness::Split { what } => write!(f, "split({what})"),
            Witness::AtLength { n, inner } => write!(f, "at-length(n={n},{inner})"),
        }
    }
}
