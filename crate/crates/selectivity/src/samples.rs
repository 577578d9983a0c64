//! Small hand-built fixture functions used by the demo and the test suites.

use crate::functions::{TableBuilder, ValueSet};
use crate::universe::{Universe, Word};
use crate::{Error, MultiMap};

/// A total multivalued function on the three words {ε, 0, 1} that is
/// associative there but not commutative, with one deliberately ambiguous
/// pair. Its min-max commutativization is not associative: the equation
/// breaks first at (ε, 1, 0) with sides {ε,1} vs {ε,0,1}.
///
/// Returns (f, [a, b, c]) with a = ε, b = 0, c = 1.
pub fn ambiguous_total_triple() -> Result<(MultiMap, [Word; 3]), Error> {
    let u = Universe::new(1)?;
    let a = Word::empty();
    let b: Word = "0".parse()?;
    let c: Word = "1".parse()?;
    let mut t = TableBuilder::new(u, false)?;
    t.fill_diagonal()?;
    t.set(a, b, ValueSet::first_only())?; // set-f(a,b) = {a}
    t.set(b, a, ValueSet::first_only())?; // set-f(b,a) = {b}
    t.set(a, c, ValueSet::both())?; //       set-f(a,c) = {a,c}
    t.set(c, a, ValueSet::first_only())?; // set-f(c,a) = {c}
    t.set(b, c, ValueSet::both())?; //       set-f(b,c) = {b,c}
    t.set(c, b, ValueSet::first_only())?; // set-f(c,b) = {c}
    Ok((t.build("ambiguous-triple"), [a, b, c]))
}

/// A partial single-valued function on three same-length words
/// b = 00 < c = 01 < a = 10 that satisfies every associativity equation on
/// the triple outright, yet both its min-max and its union
/// commutativization break associativity at (a, b, c) with sides {c} vs {}:
/// partiality is what the commutativizations cannot survive.
///
/// c's self-pair is left undefined; defining it would break the equation
/// at (c, a, c), since set-f(c, set-f(a, c)) is empty either way.
///
/// Returns (f, [a, b, c]).
pub fn sparse_partial_triple() -> Result<(MultiMap, [Word; 3]), Error> {
    let u = Universe::new(2)?;
    let a: Word = "10".parse()?;
    let b: Word = "00".parse()?;
    let c: Word = "01".parse()?;
    let mut t = TableBuilder::new(u, true)?;
    t.set(a, a, ValueSet::first_only())?;
    t.set(b, b, ValueSet::first_only())?;
    t.set(c, a, ValueSet::first_only())?; //  set-f(c,a) = {c}
    t.set(b, c, ValueSet::second_only())?; // set-f(b,c) = {c}
    // (a,b), (b,a), (a,c), (c,b) and (c,c) stay undefined
    Ok((t.build("sparse-triple"), [a, b, c]))
}

/// The canonical single-valued total selector for a target set: picks the
/// argument maximizing (membership, shortlex). Commutative, associative on
/// the whole universe, and a selector for the given set.
pub fn canonical_selector(u: Universe, b: &crate::TargetSet) -> MultiMap {
    let b = b.clone();
    MultiMap::from_rule("canonical", u, true, move |x, y| {
        let kx = (b.contains(x), x);
        let ky = (b.contains(y), y);
        Ok(if kx >= ky { ValueSet::first_only() } else { ValueSet::second_only() })
    })
}

/// A partial single-valued selector for a target set: defined only where
/// {x, y} meets the set, picking the (membership, shortlex)-larger argument.
pub fn partial_canonical_selector(u: Universe, b: &crate::TargetSet) -> MultiMap {
    let b = b.clone();
    MultiMap::from_rule("canonical-partial", u, true, move |x, y| {
        if !b.contains(x) && !b.contains(y) {
            return Ok(ValueSet::EMPTY);
        }
        let kx = (b.contains(x), x);
        let ky = (b.contains(y), y);
        Ok(if kx >= ky { ValueSet::first_only() } else { ValueSet::second_only() })
    })
}

/// The maximally ambiguous multivalued selector for a target set: returns
/// every member of {x, y} ∩ B when nonempty, all of {x, y} when both are
/// outside B. Commutative, total, associative on the whole universe.
pub fn ambiguous_selector(u: Universe, b: &crate::TargetSet) -> MultiMap {
    let b = b.clone();
    MultiMap::from_rule("ambiguous", u, false, move |x, y| {
        let mx = b.contains(x);
        let my = b.contains(y);
        Ok(if mx == my { ValueSet::both() } else { ValueSet::new(mx, my) })
    })
}
