//! Possibly partial, possibly multivalued 2-ary choice functions and the
//! property checkers that drive everything else.
//!
//! A `MultiMap` value on an ordered pair (x, y) is a subset of {x, y},
//! stored positionally as two flags. The empty subset means "undefined".
//! All checkers evaluate the function directly on the requested domain; none
//! of them consult derived structures, so they stay valid oracles for the
//! graph- and transform-level routes computed elsewhere.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::report::{PropertyReport, Witness};
use crate::universe::{Universe, Word};
use crate::{AgreementReport, Error};

/// A subset of an ordered pair {x, y}, stored as positional flags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ValueSet {
    first: bool,
    second: bool,
}

impl ValueSet {
    pub const EMPTY: ValueSet = ValueSet { first: false, second: false };

    pub fn new(first: bool, second: bool) -> ValueSet {
        ValueSet { first, second }
    }

    pub fn first_only() -> ValueSet {
        ValueSet { first: true, second: false }
    }

    pub fn second_only() -> ValueSet {
        ValueSet { first: false, second: true }
    }

    pub fn both() -> ValueSet {
        ValueSet { first: true, second: true }
    }

    pub fn contains_first(&self) -> bool {
        self.first
    }

    pub fn contains_second(&self) -> bool {
        self.second
    }

    pub fn is_empty(&self) -> bool {
        !self.first && !self.second
    }

    /// Flags for the reversed pair (y, x).
    pub fn swapped(&self) -> ValueSet {
        ValueSet { first: self.second, second: self.first }
    }

    pub fn union(&self, other: ValueSet) -> ValueSet {
        ValueSet { first: self.first || other.first, second: self.second || other.second }
    }

    /// The value as a sorted, deduplicated word list, given the pair.
    pub fn members(&self, x: Word, y: Word) -> Vec<Word> {
        let mut m = Vec::with_capacity(2);
        if self.first {
            m.push(x);
        }
        if self.second {
            m.push(y);
        }
        m.sort();
        m.dedup();
        m
    }

    pub fn contains(&self, x: Word, y: Word, w: Word) -> bool {
        (self.first && w == x) || (self.second && w == y)
    }

    /// True if the value, viewed as a set, has at most one member.
    pub fn fits_single(&self, x: Word, y: Word) -> bool {
        !(self.first && self.second) || x == y
    }
}

/// Which argument position an extended (set-valued) operand occupies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtSide {
    /// The set stands on the left: set-f(A, y).
    Left,
    /// The set stands on the right: set-f(x, A).
    Right,
}

type RuleFn = dyn Fn(Word, Word) -> Result<ValueSet, Error> + Send + Sync;

#[derive(Clone)]
enum Backend {
    Table(Arc<Table>),
    Rule(Arc<RuleFn>),
}

/// A named 2-ary choice function over a universe.
///
/// `single_valued` is a promise, not an observation: evaluation re-checks it
/// and reports an internal error if the backend breaks it. Partial functions
/// return the empty value set; that always satisfies the promise.
#[derive(Clone)]
pub struct MultiMap {
    name: String,
    universe: Universe,
    single_valued: bool,
    backend: Backend,
}

impl MultiMap {
    pub fn from_rule(
        name: &str,
        universe: Universe,
        single_valued: bool,
        rule: impl Fn(Word, Word) -> Result<ValueSet, Error> + Send + Sync + 'static,
    ) -> MultiMap {
        MultiMap {
            name: name.to_string(),
            universe,
            single_valued,
            backend: Backend::Rule(Arc::new(rule)),
        }
    }

    /// Picks the shortlex-larger argument.
    pub fn max_shortlex(universe: Universe) -> MultiMap {
        MultiMap::from_rule("maxlex", universe, true, |x, y| {
            Ok(if x >= y { ValueSet::first_only() } else { ValueSet::second_only() })
        })
    }

    /// Picks the shortlex-smaller argument.
    pub fn min_shortlex(universe: Universe) -> MultiMap {
        MultiMap::from_rule("minlex", universe, true, |x, y| {
            Ok(if x <= y { ValueSet::first_only() } else { ValueSet::second_only() })
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> MultiMap {
        self.name = name.to_string();
        self
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// The declared single-valuedness promise.
    pub fn promises_single_valued(&self) -> bool {
        self.single_valued
    }

    /// Evaluates set-f(x, y). Out-of-universe arguments are range errors.
    pub fn eval(&self, x: Word, y: Word) -> Result<ValueSet, Error> {
        self.universe.require(x)?;
        self.universe.require(y)?;
        let v = match &self.backend {
            Backend::Table(t) => t.get(x, y)?,
            Backend::Rule(r) => r(x, y)?,
        };
        if self.single_valued && !v.fits_single(x, y) {
            return Err(Error::internal(
                "MultiMap::eval",
                format!("single-valued promise of '{}' violated at ({x}, {y})", self.name),
            ));
        }
        Ok(v)
    }

    /// set-f(x, y) as a sorted word list.
    pub fn eval_members(&self, x: Word, y: Word) -> Result<Vec<Word>, Error> {
        Ok(self.eval(x, y)?.members(x, y))
    }

    /// Extends one argument to a set: the union of set-f(a, y) over a in the
    /// set (side Left), or of set-f(x, a) (side Right). Empty set in, empty
    /// set out.
    pub fn eval_ext(&self, side: ExtSide, set: &[Word], other: Word) -> Result<Vec<Word>, Error> {
        let mut out = BTreeSet::new();
        for &a in set {
            let members = match side {
                ExtSide::Left => self.eval(a, other)?.members(a, other),
                ExtSide::Right => self.eval(other, a)?.members(other, a),
            };
            out.extend(members);
        }
        Ok(out.into_iter().collect())
    }
}

/// Dense storage for a function over a small universe: 2 bits per ordered
/// pair, 4 cells per byte. Unset cells are the empty value.
pub struct Table {
    universe: Universe,
    cells: Vec<u8>,
}

/// Largest universe max-length a table may cover.
pub const MAX_TABLE_LEN: u8 = 9;

impl Table {
    fn cell_index(&self, x: Word, y: Word) -> Result<usize, Error> {
        let m = self.universe.count() as usize;
        Ok(self.universe.index(x)? * m + self.universe.index(y)?)
    }

    fn get(&self, x: Word, y: Word) -> Result<ValueSet, Error> {
        let idx = self.cell_index(x, y)?;
        let byte = self.cells[idx / 4];
        let pair = (byte >> ((idx % 4) * 2)) & 0b11;
        Ok(ValueSet::new(pair & 1 != 0, pair & 2 != 0))
    }
}

/// Builder for table-backed functions.
pub struct TableBuilder {
    universe: Universe,
    single_valued: bool,
    cells: Vec<u8>,
}

impl TableBuilder {
    pub fn new(universe: Universe, single_valued: bool) -> Result<TableBuilder, Error> {
        if universe.max_len() > MAX_TABLE_LEN {
            return Err(Error::invalid(
                "TableBuilder::new",
                format!("table universe max length {} exceeds {MAX_TABLE_LEN}", universe.max_len()),
            ));
        }
        let m = universe.count() as usize;
        Ok(TableBuilder { universe, single_valued, cells: vec![0; (m * m + 3) / 4] })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn set(&mut self, x: Word, y: Word, v: ValueSet) -> Result<(), Error> {
        if self.single_valued && !v.fits_single(x, y) {
            return Err(Error::invalid(
                "TableBuilder::set",
                format!("two-member value at ({x}, {y}) in a single-valued table"),
            ));
        }
        let m = self.universe.count() as usize;
        let idx = self.universe.index(x)? * m + self.universe.index(y)?;
        let bits = u8::from(v.contains_first()) | (u8::from(v.contains_second()) << 1);
        let slot = &mut self.cells[idx / 4];
        let shift = (idx % 4) * 2;
        *slot = (*slot & !(0b11 << shift)) | (bits << shift);
        Ok(())
    }

    pub fn get(&self, x: Word, y: Word) -> Result<ValueSet, Error> {
        let m = self.universe.count() as usize;
        let idx = self.universe.index(x)? * m + self.universe.index(y)?;
        let byte = self.cells[idx / 4];
        let pair = (byte >> ((idx % 4) * 2)) & 0b11;
        Ok(ValueSet::new(pair & 1 != 0, pair & 2 != 0))
    }

    /// Sets every diagonal cell to {x}.
    pub fn fill_diagonal(&mut self) -> Result<(), Error> {
        for w in self.universe.words() {
            self.set(w, w, ValueSet::first_only())?;
        }
        Ok(())
    }

    pub fn build(self, name: &str) -> MultiMap {
        MultiMap {
            name: name.to_string(),
            universe: self.universe,
            single_valued: self.single_valued,
            backend: Backend::Table(Arc::new(Table {
                universe: self.universe,
                cells: self.cells,
            })),
        }
    }
}

/// A subset of the universe with O(1) membership, the target of selection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TargetSet {
    universe: Universe,
    bits: Vec<u64>,
    count: usize,
}

impl TargetSet {
    pub fn new(universe: Universe) -> TargetSet {
        let words = ((universe.count() as usize) + 63) / 64;
        TargetSet { universe, bits: vec![0; words], count: 0 }
    }

    pub fn from_words<I: IntoIterator<Item = Word>>(
        universe: Universe,
        words: I,
    ) -> Result<TargetSet, Error> {
        let mut s = TargetSet::new(universe);
        for w in words {
            s.insert(w)?;
        }
        Ok(s)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Returns whether the word was newly added.
    pub fn insert(&mut self, w: Word) -> Result<bool, Error> {
        let i = self.universe.index(w)?;
        let mask = 1u64 << (i % 64);
        let fresh = self.bits[i / 64] & mask == 0;
        self.bits[i / 64] |= mask;
        if fresh {
            self.count += 1;
        }
        Ok(fresh)
    }

    /// Membership; words outside the universe are never members.
    pub fn contains(&self, w: Word) -> bool {
        match self.universe.index(w) {
            Ok(i) => self.bits[i / 64] >> (i % 64) & 1 == 1,
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// All members in ascending shortlex order.
    pub fn members(&self) -> Vec<Word> {
        self.universe.words().filter(|w| self.contains(*w)).collect()
    }

    pub fn members_exact(&self, n: u8) -> Result<Vec<Word>, Error> {
        Ok(self.universe.exact(n)?.filter(|w| self.contains(*w)).collect())
    }

    pub fn members_upto(&self, n: u8) -> Result<Vec<Word>, Error> {
        Ok(self.universe.upto(n)?.filter(|w| self.contains(*w)).collect())
    }

    pub fn count_exact(&self, n: u8) -> Result<usize, Error> {
        Ok(self.universe.exact(n)?.filter(|w| self.contains(*w)).count())
    }

    /// Nonmembers of exactly length n, ascending.
    pub fn complement_exact(&self, n: u8) -> Result<Vec<Word>, Error> {
        Ok(self.universe.exact(n)?.filter(|w| !self.contains(*w)).collect())
    }
}

/// Copies any function into an explicit table over its own universe,
/// keeping the name and the single-valued promise. Evaluation of the copy
/// is O(1) regardless of how expensive the original rule is. Fails when
/// the universe is too large to tabulate.
pub fn materialize(f: &MultiMap) -> Result<MultiMap, Error> {
    let u = f.universe();
    let mut t = TableBuilder::new(u, f.promises_single_valued())?;
    for x in u.words() {
        for y in u.words() {
            t.set(x, y, f.eval(x, y)?)?;
        }
    }
    Ok(t.build(f.name()))
}

/// Totality, commutativity and single-valuedness of f on the domain D,
/// reported in that order.
pub fn check_basic(f: &MultiMap, d: &[Word]) -> Result<[PropertyReport; 3], Error> {
    let pairs = (d.len() * d.len()) as u64;
    let mut total = PropertyReport::pass("total-on", f.name(), pairs, 0);
    let mut comm = PropertyReport::pass("commutative-on", f.name(), pairs, 0);
    let mut single = PropertyReport::pass("single-valued-on", f.name(), pairs, 0);
    'total: for &x in d {
        for &y in d {
            if f.eval(x, y)?.is_empty() {
                total = PropertyReport::fail(
                    "total-on",
                    f.name(),
                    pairs,
                    0,
                    Witness::UndefinedPair { x, y },
                );
                break 'total;
            }
        }
    }
    'comm: for (i, &x) in d.iter().enumerate() {
        for &y in d.iter().skip(i) {
            let xy = f.eval_members(x, y)?;
            let yx = f.eval_members(y, x)?;
            if xy != yx {
                comm = PropertyReport::fail(
                    "commutative-on",
                    f.name(),
                    pairs,
                    0,
                    Witness::NotCommutative { x, y, xy, yx },
                );
                break 'comm;
            }
        }
    }
    'single: for &x in d {
        for &y in d {
            let v = f.eval(x, y)?;
            if !v.fits_single(x, y) {
                single = PropertyReport::fail(
                    "single-valued-on",
                    f.name(),
                    pairs,
                    0,
                    Witness::MultiValued { x, y, value: v.members(x, y) },
                );
                break 'single;
            }
        }
    }
    Ok([total, comm, single])
}

/// Both sides of the extended associativity equation at (a, b, c):
/// left = set-f(a, set-f(b, c)), right = set-f(set-f(a, b), c).
pub fn assoc_sides(f: &MultiMap, a: Word, b: Word, c: Word) -> Result<(Vec<Word>, Vec<Word>), Error> {
    let inner_right = f.eval_members(b, c)?;
    let left = f.eval_ext(ExtSide::Right, &inner_right, a)?;
    let inner_left = f.eval_members(a, b)?;
    let right = f.eval_ext(ExtSide::Left, &inner_left, c)?;
    Ok((left, right))
}

fn totality_precondition(f: &MultiMap, d: &[Word], op: &'static str) -> Result<(), Error> {
    for &x in d {
        for &y in d {
            if f.eval(x, y)?.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "total-on",
                        f.name(),
                        (d.len() * d.len()) as u64,
                        0,
                        Witness::UndefinedPair { x, y },
                    ),
                ));
            }
        }
    }
    Ok(())
}

/// Extended associativity of f over every triple from D. Requires f total
/// on D (checked; the error names an undefined pair). The witness is the
/// first failing triple in iteration order over D.
pub fn is_associative_on(f: &MultiMap, d: &[Word]) -> Result<PropertyReport, Error> {
    totality_precondition(f, d, "is_associative_on")?;
    let triples = (d.len() as u64).pow(3);
    for &a in d {
        for &b in d {
            for &c in d {
                let (left, right) = assoc_sides(f, a, b, c)?;
                if left != right {
                    return Ok(PropertyReport::fail(
                        "associative-on",
                        f.name(),
                        0,
                        triples,
                        Witness::AssocBreach { a, b, c, left, right },
                    ));
                }
            }
        }
    }
    Ok(PropertyReport::pass("associative-on", f.name(), 0, triples))
}

/// Like `is_associative_on` but a triple only counts as a violation when
/// both sides of the equation are nonempty. Partial functions allowed.
pub fn is_weakly_associative_on(f: &MultiMap, d: &[Word]) -> Result<PropertyReport, Error> {
    let triples = (d.len() as u64).pow(3);
    for &a in d {
        for &b in d {
            for &c in d {
                let (left, right) = assoc_sides(f, a, b, c)?;
                if !left.is_empty() && !right.is_empty() && left != right {
                    return Ok(PropertyReport::fail(
                        "weakly-associative-on",
                        f.name(),
                        0,
                        triples,
                        Witness::AssocBreach { a, b, c, left, right },
                    ));
                }
            }
        }
    }
    Ok(PropertyReport::pass("weakly-associative-on", f.name(), 0, triples))
}

/// Associativity within each length slice of the universe, up to max_len.
/// Totality is checked per slice; a slice that is not total is reported as
/// a precondition error whose witness names the length.
pub fn is_associative_at_each_length(f: &MultiMap) -> Result<PropertyReport, Error> {
    let u = f.universe();
    let mut triples = 0u64;
    for n in 0..=u.max_len() {
        let d: Vec<Word> = u.exact(n)?.collect();
        for &x in &d {
            for &y in &d {
                if f.eval(x, y)?.is_empty() {
                    return Err(Error::precondition(
                        "is_associative_at_each_length",
                        PropertyReport::fail(
                            "total-at-length",
                            f.name(),
                            (d.len() * d.len()) as u64,
                            0,
                            Witness::AtLength { n, inner: Box::new(Witness::UndefinedPair { x, y }) },
                        ),
                    ));
                }
            }
        }
        triples += (d.len() as u64).pow(3);
        for &a in &d {
            for &b in &d {
                for &c in &d {
                    let (left, right) = assoc_sides(f, a, b, c)?;
                    if left != right {
                        return Ok(PropertyReport::fail(
                            "associative-at-each-length",
                            f.name(),
                            0,
                            triples,
                            Witness::AtLength {
                                n,
                                inner: Box::new(Witness::AssocBreach { a, b, c, left, right }),
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(PropertyReport::pass("associative-at-each-length", f.name(), 0, triples))
}

/// The selector property of f for B over pairs from D: whenever {x, y}
/// meets B, the value must be nonempty and lie inside B.
pub fn is_selector_for(f: &MultiMap, b: &TargetSet, d: &[Word]) -> Result<PropertyReport, Error> {
    let pairs = (d.len() * d.len()) as u64;
    for &x in d {
        for &y in d {
            if !b.contains(x) && !b.contains(y) {
                continue;
            }
            let value = f.eval_members(x, y)?;
            if value.is_empty() || value.iter().any(|w| !b.contains(*w)) {
                return Ok(PropertyReport::fail(
                    "selector-for",
                    f.name(),
                    pairs,
                    0,
                    Witness::SelectorBreach { x, y, value },
                ));
            }
        }
    }
    Ok(PropertyReport::pass("selector-for", f.name(), pairs, 0))
}

/// Three equivalent formulations of associativity over a domain B, each
/// computed independently; the report passes iff all three agree.
/// Requires f commutative and total on B (checked).
///
/// Conditions: (1) extended associativity on B; (2) the symmetric equation
/// set-f(a, set-f(b,c)) = set-f(b, set-f(a,c)) = set-f(c, set-f(a,b)) for
/// all triples; (3) the same equation for pairwise-distinct triples only.
pub fn three_way_assoc_check(f: &MultiMap, b: &[Word]) -> Result<AgreementReport, Error> {
    let op = "three_way_assoc_check";
    totality_precondition(f, b, op)?;
    for (i, &x) in b.iter().enumerate() {
        for &y in b.iter().skip(i) {
            let xy = f.eval_members(x, y)?;
            let yx = f.eval_members(y, x)?;
            if xy != yx {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "commutative-on",
                        f.name(),
                        (b.len() * b.len()) as u64,
                        0,
                        Witness::NotCommutative { x, y, xy, yx },
                    ),
                ));
            }
        }
    }
    let cond1 = is_associative_on(f, b)?.pass;

    let symmetric_eq = |a: Word, bb: Word, c: Word| -> Result<bool, Error> {
        let v1 = f.eval_ext(ExtSide::Right, &f.eval_members(bb, c)?, a)?;
        let v2 = f.eval_ext(ExtSide::Right, &f.eval_members(a, c)?, bb)?;
        let v3 = f.eval_ext(ExtSide::Right, &f.eval_members(a, bb)?, c)?;
        Ok(v1 == v2 && v2 == v3)
    };
    let mut cond2 = true;
    'c2: for &x in b {
        for &y in b {
            for &z in b {
                if !symmetric_eq(x, y, z)? {
                    cond2 = false;
                    break 'c2;
                }
            }
        }
    }
    let mut cond3 = true;
    'c3: for &x in b {
        for &y in b {
            for &z in b {
                if x == y || y == z || x == z {
                    continue;
                }
                if !symmetric_eq(x, y, z)? {
                    cond3 = false;
                    break 'c3;
                }
            }
        }
    }

    let verdicts = vec![cond1, cond2, cond3];
    let triples = (b.len() as u64).pow(3) * 3;
    let report = if cond1 == cond2 && cond2 == cond3 {
        PropertyReport::pass("three-way-assoc-agreement", f.name(), 0, triples)
    } else {
        PropertyReport::fail(
            "three-way-assoc-agreement",
            f.name(),
            0,
            triples,
            Witness::Split {
                what: format!(
                    "associative={cond1} symmetric-all={cond2} symmetric-distinct={cond3}"
                ),
            },
        )
    };
    Ok(AgreementReport { verdicts, report })
}

/// For a selector f for a nonempty B: if f is undefined anywhere on its
/// universe, f cannot be associative; the report carries the demonstrating
/// triple (an undefined pair completed by a member of B). A total f passes
/// with no witness.
pub fn totality_consequence(f: &MultiMap, b: &TargetSet) -> Result<PropertyReport, Error> {
    let op = "totality_consequence";
    if b.is_empty() {
        return Err(Error::precondition(
            op,
            PropertyReport::fail("target-nonempty", f.name(), 0, 0, Witness::Split {
                what: "target set is empty".to_string(),
            }),
        ));
    }
    let domain: Vec<Word> = f.universe().words().collect();
    let sel = is_selector_for(f, b, &domain)?;
    if !sel.pass {
        return Err(Error::precondition(op, sel));
    }
    let pairs = (domain.len() * domain.len()) as u64;
    let mut undefined: Option<(Word, Word)> = None;
    'scan: for &x in &domain {
        for &y in &domain {
            if f.eval(x, y)?.is_empty() {
                undefined = Some((x, y));
                break 'scan;
            }
        }
    }
    let Some((x, y)) = undefined else {
        return Ok(PropertyReport::pass("totality-consequence", f.name(), pairs, 0));
    };
    let z = b.members()[0];
    let (left, right) = assoc_sides(f, x, y, z)?;
    let witness = Witness::AssocBreach { a: x, b: y, c: z, left: left.clone(), right: right.clone() };
    if left != right {
        // partiality visibly breaks associativity, as required
        let mut rep = PropertyReport::pass("totality-consequence", f.name(), pairs, 1);
        rep.witness = Some(witness);
        Ok(rep)
    } else {
        Ok(PropertyReport::fail("totality-consequence", f.name(), pairs, 1, witness))
    }
}

/// Which value shapes a class enumeration may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ValueMode {
    Single,
    Multi,
}

/// Exhaustive enumeration of every function on a domain D of at most 6
/// words, filtered structurally: single- or multivalued cells, optionally
/// commutative only, optionally total only (which forces diagonal {x}).
/// Functions are materialized as table-backed `MultiMap`s named by index.
pub struct ClassEnumerator {
    domain: Vec<Word>,
    universe: Universe,
    mode: ValueMode,
    commutative_only: bool,
    total_only: bool,
    /// (i, j) index pairs that vary freely, diagonal excluded.
    cells: Vec<(usize, usize)>,
    total_count: u64,
    next_index: u64,
}

pub fn enumerate_class(
    d: &[Word],
    mode: ValueMode,
    commutative_only: bool,
    total_only: bool,
) -> Result<ClassEnumerator, Error> {
    let op = "enumerate_class";
    if d.is_empty() || d.len() > 6 {
        return Err(Error::invalid(op, format!("domain size {} outside 1..=6", d.len())));
    }
    let mut domain = d.to_vec();
    domain.sort();
    domain.dedup();
    if domain.len() != d.len() {
        return Err(Error::invalid(op, "duplicate words in domain"));
    }
    let max_len = domain.iter().map(|w| w.len()).max().unwrap_or(0);
    if max_len > MAX_TABLE_LEN {
        return Err(Error::invalid(op, format!("domain words longer than {MAX_TABLE_LEN}")));
    }
    let universe = Universe::new(max_len)?;
    let mut cells = Vec::new();
    for i in 0..domain.len() {
        for j in 0..domain.len() {
            if i == j {
                continue;
            }
            if commutative_only && i > j {
                continue;
            }
            cells.push((i, j));
        }
    }
    let per_cell = cell_choices(mode, total_only).len() as u64;
    let diag_choices: u64 = if total_only { 1 } else { 2 };
    let mut count: u64 = 1;
    for _ in 0..cells.len() {
        count = count
            .checked_mul(per_cell)
            .ok_or_else(|| Error::invalid(op, "class too large to enumerate"))?;
    }
    for _ in 0..domain.len() {
        count = count
            .checked_mul(diag_choices)
            .ok_or_else(|| Error::invalid(op, "class too large to enumerate"))?;
    }
    Ok(ClassEnumerator {
        domain,
        universe,
        mode,
        commutative_only,
        total_only,
        cells,
        total_count: count,
        next_index: 0,
    })
}

/// Off-diagonal cell alternatives for one ordered pair, in a fixed order.
fn cell_choices(mode: ValueMode, total_only: bool) -> &'static [ValueSet] {
    const S_TOTAL: [ValueSet; 2] = [
        ValueSet { first: true, second: false },
        ValueSet { first: false, second: true },
    ];
    const M_TOTAL: [ValueSet; 3] = [
        ValueSet { first: true, second: false },
        ValueSet { first: false, second: true },
        ValueSet { first: true, second: true },
    ];
    const S_PART: [ValueSet; 3] = [
        ValueSet { first: false, second: false },
        ValueSet { first: true, second: false },
        ValueSet { first: false, second: true },
    ];
    const M_PART: [ValueSet; 4] = [
        ValueSet { first: false, second: false },
        ValueSet { first: true, second: false },
        ValueSet { first: false, second: true },
        ValueSet { first: true, second: true },
    ];
    match (mode, total_only) {
        (ValueMode::Single, true) => &S_TOTAL,
        (ValueMode::Multi, true) => &M_TOTAL,
        (ValueMode::Single, false) => &S_PART,
        (ValueMode::Multi, false) => &M_PART,
    }
}

impl ClassEnumerator {
    /// Size of the class being enumerated.
    pub fn total_count(&self) -> u64 {
        self.total_count
    }

    pub fn domain(&self) -> &[Word] {
        &self.domain
    }

    fn build(&self, index: u64) -> Result<MultiMap, Error> {
        let choices = cell_choices(self.mode, self.total_only);
        let mut rest = index;
        let mut builder = TableBuilder::new(self.universe, self.mode == ValueMode::Single)?;
        for &(i, j) in &self.cells {
            let v = choices[(rest % choices.len() as u64) as usize];
            rest /= choices.len() as u64;
            builder.set(self.domain[i], self.domain[j], v)?;
            if self.commutative_only {
                builder.set(self.domain[j], self.domain[i], v.swapped())?;
            }
        }
        for &w in &self.domain {
            let on = if self.total_only { true } else { rest % 2 == 1 };
            if !self.total_only {
                rest /= 2;
            }
            if on {
                builder.set(w, w, ValueSet::first_only())?;
            }
        }
        let kind = match self.mode {
            ValueMode::Single => "single",
            ValueMode::Multi => "multi",
        };
        Ok(builder.build(&format!("class-{kind}[{index}]")))
    }
}

impl Iterator for ClassEnumerator {
    type Item = Result<MultiMap, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_index >= self.total_count {
            return None;
        }
        let f = self.build(self.next_index);
        self.next_index += 1;
        Some(f)
    }
}
