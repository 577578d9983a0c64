//! Transformations between selectors: commutativizations, connector-based
//! associativizations, score- and gap-based reconstruction, and order
//! merging up to a length bound.
//!
//! Construction preconditions are checked eagerly; rule-backed outputs
//! capture immutable clones of their inputs and evaluate lazily. Operations
//! whose pre-scan would evaluate more pairs than the budget refuse with a
//! budget error instead of silently taking minutes.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::functions::{is_selector_for, TargetSet, ValueSet};
use crate::report::{PropertyReport, Witness};
use crate::universe::{Universe, Word, MAX_UNIVERSE_LEN};
use crate::witness::score;
use crate::{Error, MultiMap};

/// f'(x, y) = f(min(x, y), max(x, y)) under shortlex; always commutative.
pub fn minmax_commutativize(f: &MultiMap) -> MultiMap {
    let inner = f.clone();
    MultiMap::from_rule(
        &format!("minmax({})", f.name()),
        f.universe(),
        f.promises_single_valued(),
        move |x, y| {
            let v = inner.eval(x.min(y), x.max(y))?;
            Ok(if x <= y { v } else { v.swapped() })
        },
    )
}

/// f''(x, y) = max(f(x, y), f(y, x)) under shortlex. Requires f
/// single-valued and total (checked eagerly over the whole universe).
pub fn maxvals_commutativize(f: &MultiMap, budget: u64) -> Result<MultiMap, Error> {
    let op = "maxvals_commutativize";
    let u = f.universe();
    check_budget(op, u.count() * u.count(), budget)?;
    for x in u.words() {
        for y in u.words() {
            let v = f.eval(x, y)?;
            if v.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail("total-on", f.name(), u.count() * u.count(), 0, Witness::UndefinedPair { x, y }),
                ));
            }
            if !v.fits_single(x, y) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        u.count() * u.count(),
                        0,
                        Witness::MultiValued { x, y, value: v.members(x, y) },
                    ),
                ));
            }
        }
    }
    let inner = f.clone();
    Ok(MultiMap::from_rule(
        &format!("maxvals({})", f.name()),
        u,
        true,
        move |x, y| {
            let a = single_value(&inner, x, y)?;
            let b = single_value(&inner, y, x)?;
            let m = a.max(b);
            Ok(ValueSet::new(m == x, m == y))
        },
    ))
}

fn single_value(f: &MultiMap, x: Word, y: Word) -> Result<Word, Error> {
    let members = f.eval_members(x, y)?;
    match members.as_slice() {
        [w] => Ok(*w),
        _ => Err(Error::internal(
            "single_value",
            format!("'{}' not single-valued total at ({x}, {y})", f.name()),
        )),
    }
}

/// f^(x, y) = f(x, y) ∪ f(y, x); always commutative, keeps partiality.
pub fn union_commutativize(f: &MultiMap) -> MultiMap {
    let inner = f.clone();
    MultiMap::from_rule(&format!("union({})", f.name()), f.universe(), false, move |x, y| {
        Ok(inner.eval(x, y)?.union(inner.eval(y, x)?.swapped()))
    })
}

/// The two connector clauses of w for the pair (x, y):
/// (a) w ∈ set-f(x, w) and y ∈ set-f(w, y);
/// (b) x ∈ set-f(x, w) and w ∈ set-f(w, y).
pub fn connector_clauses(f: &MultiMap, x: Word, y: Word, w: Word) -> Result<(bool, bool), Error> {
    let xw = f.eval(x, w)?;
    let wy = f.eval(w, y)?;
    let a = xw.contains(x, w, w) && wy.contains(w, y, y);
    let b = xw.contains(x, w, x) && wy.contains(w, y, w);
    Ok((a, b))
}

/// Scans words in ascending shortlex order up to the bound (default:
/// min(x, y), sound for total f because x and y connect themselves) and
/// returns the first connector of x and y, if any.
pub fn smallest_connector(
    f: &MultiMap,
    x: Word,
    y: Word,
    bound: Option<Word>,
) -> Result<Option<Word>, Error> {
    let bound = bound.unwrap_or_else(|| x.min(y));
    f.universe().require(bound)?;
    for w in f.universe().words() {
        if w > bound {
            break;
        }
        let (a, b) = connector_clauses(f, x, y, w)?;
        if a || b {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Single-valued commutative associativization of a total function: decides
/// each pair by the clauses of its smallest connector (searched up to
/// min(x, y)); clause (a) alone gives y, clause (b) alone gives x, both give
/// max(x, y). f is union-commutativized internally if it is not already
/// commutative. Requires f total (checked).
pub fn associativize_total(f: &MultiMap, budget: u64) -> Result<MultiMap, Error> {
    let op = "associativize_total";
    let u = f.universe();
    check_budget(op, u.count() * u.count(), budget)?;
    let mut commutative = true;
    for x in u.words() {
        for y in u.words() {
            if f.eval(x, y)?.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail("total-on", f.name(), u.count() * u.count(), 0, Witness::UndefinedPair { x, y }),
                ));
            }
            if commutative && x < y && f.eval_members(x, y)? != f.eval_members(y, x)? {
                commutative = false;
            }
        }
    }
    let base = if commutative { f.clone() } else { union_commutativize(f) };
    let name = format!("assoc({})", f.name());
    Ok(connector_rule(&name, base, true))
}

/// Single-valued commutative total associativization of a possibly partial
/// function: like `associativize_total` but the connector search is bounded
/// by max(x, y) and pairs with no connector in range resolve to max(x, y).
/// The output is associative on any set f selects.
pub fn associativize_partial(f: &MultiMap, budget: u64) -> Result<MultiMap, Error> {
    let op = "associativize_partial";
    let u = f.universe();
    check_budget(op, u.count() * u.count(), budget)?;
    let mut commutative = true;
    'scan: for x in u.words() {
        for y in u.words() {
            if x < y && f.eval_members(x, y)? != f.eval_members(y, x)? {
                commutative = false;
                break 'scan;
            }
        }
    }
    let base = if commutative { f.clone() } else { union_commutativize(f) };
    let name = format!("assocp({})", f.name());
    Ok(connector_rule(&name, base, false))
}

/// Fully associative single-valued commutative selector from a possibly
/// partial one: associativize the partial function, then associativize the
/// total result.
pub fn associativize_full(f: &MultiMap, budget: u64) -> Result<MultiMap, Error> {
    let h = associativize_partial(f, budget)?;
    let g = associativize_total(&h, budget)?;
    Ok(g.with_name(&format!("assocf({})", f.name())))
}

/// Shared connector-decision rule. With `total_bound` the search stops at
/// min(x, y) and a missing connector is an internal error; otherwise it
/// stops at max(x, y) and a missing connector resolves to max(x, y).
fn connector_rule(name: &str, base: MultiMap, total_bound: bool) -> MultiMap {
    let universe = base.universe();
    MultiMap::from_rule(name, universe, true, move |x, y| {
        let bound = if total_bound { x.min(y) } else { x.max(y) };
        let Some(w) = smallest_connector(&base, x, y, Some(bound))? else {
            if total_bound {
                return Err(Error::internal(
                    "connector_rule",
                    format!("total function lacks a connector for ({x}, {y})"),
                ));
            }
            return Ok(ValueSet::new(x >= y, y > x));
        };
        let (a, b) = connector_clauses(&base, x, y, w)?;
        let winner = match (a, b) {
            (true, false) => y,
            (false, true) => x,
            (true, true) => x.max(y),
            (false, false) => {
                return Err(Error::internal(
                    "connector_rule",
                    format!("connector {w} satisfies neither clause for ({x}, {y})"),
                ))
            }
        };
        Ok(ValueSet::new(winner == x, winner == y))
    })
}

/// Rebuilds a selector so it is associative at each length: same-length
/// pairs are decided by score (ties by shortlex max), cross-length pairs
/// defer to f. Requires f a commutative single-valued total selector for B
/// (checked).
pub fn score_selector(f: &MultiMap, b: &TargetSet, budget: u64) -> Result<MultiMap, Error> {
    let op = "score_selector";
    precheck_selector(op, f, b, f.universe().max_len(), budget)?;
    let inner = f.clone();
    let memo: Mutex<HashMap<Word, u64>> = Mutex::new(HashMap::new());
    Ok(MultiMap::from_rule(
        &format!("score({})", f.name()),
        f.universe(),
        true,
        move |x, y| {
            if x.len() != y.len() {
                return inner.eval(x, y);
            }
            let sx = memo_score(&inner, &memo, x)?;
            let sy = memo_score(&inner, &memo, y)?;
            let first = match sx.cmp(&sy) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => x >= y,
            };
            Ok(ValueSet::new(first, !first))
        },
    ))
}

fn memo_score(f: &MultiMap, memo: &Mutex<HashMap<Word, u64>>, x: Word) -> Result<u64, Error> {
    if let Some(&s) = memo.lock().expect("memo poisoned").get(&x) {
        return Ok(s);
    }
    let s = score(f, x)?;
    memo.lock().expect("memo poisoned").insert(x, s);
    Ok(s)
}

/// Shared precondition scan: commutative, single-valued, total, selector
/// for B, over all words up to the given length.
fn precheck_selector(
    op: &'static str,
    f: &MultiMap,
    b: &TargetSet,
    upto: u8,
    budget: u64,
) -> Result<(), Error> {
    let u = f.universe();
    if u != b.universe() {
        return Err(Error::invalid(op, "function and target set live in different universes"));
    }
    let count = (1u64 << (upto + 1)) - 1;
    let pairs = count * count;
    check_budget(op, pairs, budget)?;
    for x in u.upto(upto)? {
        for y in u.upto(upto)? {
            if y < x {
                continue;
            }
            let xy = f.eval(x, y)?;
            let yx = f.eval(y, x)?;
            if xy.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail("total-on", f.name(), pairs, 0, Witness::UndefinedPair { x, y }),
                ));
            }
            if yx.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail("total-on", f.name(), pairs, 0, Witness::UndefinedPair { x: y, y: x }),
                ));
            }
            if !xy.fits_single(x, y) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        pairs,
                        0,
                        Witness::MultiValued { x, y, value: xy.members(x, y) },
                    ),
                ));
            }
            if xy.members(x, y) != yx.members(y, x) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "commutative-on",
                        f.name(),
                        pairs,
                        0,
                        Witness::NotCommutative {
                            x,
                            y,
                            xy: xy.members(x, y),
                            yx: yx.members(y, x),
                        },
                    ),
                ));
            }
        }
    }
    let domain: Vec<Word> = u.upto(upto)?.collect();
    let sel = is_selector_for(f, b, &domain)?;
    if !sel.pass {
        return Err(Error::precondition(op, sel));
    }
    Ok(())
}

fn check_budget(op: &'static str, needed: u64, budget: u64) -> Result<(), Error> {
    if needed > budget {
        return Err(Error::Budget { op, needed, budget });
    }
    Ok(())
}

/// A set of permitted member lengths, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapLengths {
    lengths: Vec<u8>,
}

impl GapLengths {
    pub fn new<I: IntoIterator<Item = u8>>(lengths: I) -> Result<GapLengths, Error> {
        let mut v: Vec<u8> = lengths.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&max) = v.last() {
            if max > MAX_UNIVERSE_LEN {
                return Err(Error::invalid(
                    "GapLengths::new",
                    format!("length {max} exceeds {MAX_UNIVERSE_LEN}"),
                ));
            }
        }
        Ok(GapLengths { lengths: v })
    }

    /// The doubly exponential ladder 2, 16, ... truncated to max_len.
    pub fn default_for(max_len: u8) -> GapLengths {
        let mut v = Vec::new();
        if max_len >= 2 {
            v.push(2);
        }
        if max_len >= 16 {
            v.push(16);
        }
        GapLengths { lengths: v }
    }

    pub fn contains(&self, n: u8) -> bool {
        self.lengths.binary_search(&n).is_ok()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.lengths
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

impl std::fmt::Display for GapLengths {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, n) in self.lengths.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Builds the seven-case selector for a set whose members live only at the
/// given lengths and are upward closed in lex order within each length
/// (both checked): lengths in the list beat lengths outside it; between two
/// listed lengths the shorter word wins if it is a member, otherwise the
/// longer word wins; everything else goes to the shortlex max.
pub fn gapset_selector(b: &TargetSet, lengths: &GapLengths) -> Result<MultiMap, Error> {
    let op = "gapset_selector";
    if lengths.is_empty() {
        return Err(Error::invalid(op, "empty length list"));
    }
    let u = b.universe();
    for m in b.members() {
        if !lengths.contains(m.len()) {
            return Err(Error::precondition(
                op,
                PropertyReport::fail(
                    "members-within-lengths",
                    "gapset-target",
                    0,
                    0,
                    Witness::LengthOutside { w: m },
                ),
            ));
        }
    }
    for n in 0..=u.max_len() {
        let mut first_member: Option<Word> = None;
        for w in u.exact(n)? {
            if b.contains(w) {
                first_member.get_or_insert(w);
            } else if let Some(m) = first_member {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "monotone-at-length",
                        "gapset-target",
                        0,
                        0,
                        Witness::NotMonotone { member: m, nonmember: w },
                    ),
                ));
            }
        }
    }
    let b = b.clone();
    let lengths = lengths.clone();
    Ok(MultiMap::from_rule(&format!("gapset[{lengths}]"), u, true, move |x, y| {
        let lx = lengths.contains(x.len());
        let ly = lengths.contains(y.len());
        let first = if lx && !ly {
            true
        } else if !lx && ly {
            false
        } else if lx && ly && x.len() < y.len() {
            b.contains(x)
        } else if lx && ly && x.len() > y.len() {
            !b.contains(y)
        } else {
            x >= y
        };
        Ok(ValueSet::new(first, !first))
    }))
}

/// A total order over a finite set of words, smallest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderList {
    words: Vec<Word>,
}

impl OrderList {
    pub fn new(words: Vec<Word>) -> Result<OrderList, Error> {
        let mut seen = words.clone();
        seen.sort();
        if seen.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::invalid("OrderList::new", "duplicate word in order"));
        }
        Ok(OrderList { words })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: Word) -> Option<usize> {
        self.words.iter().position(|&x| x == w)
    }

    /// The later of x and y in this order.
    pub fn max_of(&self, x: Word, y: Word) -> Result<Word, Error> {
        let px = self
            .position(x)
            .ok_or_else(|| Error::invalid("OrderList::max_of", format!("{x} not in order")))?;
        let py = self
            .position(y)
            .ok_or_else(|| Error::invalid("OrderList::max_of", format!("{y} not in order")))?;
        Ok(if px >= py { x } else { y })
    }

    /// True if other's words appear in self in the same relative order.
    pub fn respects(&self, other: &OrderList) -> bool {
        let mut want = other.words.iter();
        let mut next = want.next();
        for w in &self.words {
            if Some(w) == next {
                next = want.next();
            }
        }
        next.is_none()
    }
}

/// Merges an order S of all words up to length n with an order L of the
/// words of length n+1, guided by a single-valued total selector g: before
/// each x of S, it splices the L-prefix up to the last y that x beats under
/// g; the unconsumed tail of L is appended at the end. The result orders
/// all words up to length n+1 and respects both inputs.
pub fn merge_orders(s: &OrderList, l: &OrderList, g: &MultiMap) -> Result<OrderList, Error> {
    let op = "merge_orders";
    // S must be a permutation of all words up to some length n, L of the
    // words of length n+1
    let count = s.len() as u64;
    if count == 0 || (count + 1) & count != 0 {
        return Err(Error::invalid(op, format!("first order has {count} words, not 2^(n+1)-1")));
    }
    let n = (count + 1).trailing_zeros() as u8 - 1;
    if n >= MAX_UNIVERSE_LEN {
        return Err(Error::invalid(op, format!("inferred length {n} out of range")));
    }
    let u = Universe::new(n + 1)?;
    let mut s_sorted = s.words().to_vec();
    s_sorted.sort();
    if s_sorted != u.upto(n)?.collect::<Vec<_>>() {
        return Err(Error::invalid(op, "first order is not a permutation of all words up to length n"));
    }
    let mut l_sorted = l.words().to_vec();
    l_sorted.sort();
    if l_sorted != u.exact(n + 1)?.collect::<Vec<_>>() {
        return Err(Error::invalid(op, "second order is not a permutation of the words of length n+1"));
    }

    let ys = l.words();
    let mut out: Vec<Word> = Vec::with_capacity(s.len() + l.len());
    let mut next = 0usize; // index of y_ℓ
    for &x in s.words() {
        // r = max{ j | ℓ ≤ j ∧ g(x, y_j) = x }
        let mut r: Option<usize> = None;
        for (j, &y) in ys.iter().enumerate().skip(next) {
            if merge_pick(g, x, y)? == x {
                r = Some(j);
            }
        }
        if let Some(r) = r {
            out.extend_from_slice(&ys[next..=r]);
            out.push(x);
            next = r + 1;
        } else {
            out.push(x);
        }
    }
    out.extend_from_slice(&ys[next..]);
    OrderList::new(out)
}

fn merge_pick(g: &MultiMap, x: Word, y: Word) -> Result<Word, Error> {
    let members = g.eval_members(x, y)?;
    match members.as_slice() {
        [w] => Ok(*w),
        _ => Err(Error::precondition(
            "merge_orders",
            if members.is_empty() {
                PropertyReport::fail("total-on", g.name(), 0, 0, Witness::UndefinedPair { x, y })
            } else {
                PropertyReport::fail(
                    "single-valued-on",
                    g.name(),
                    0,
                    0,
                    Witness::MultiValued { x, y, value: members },
                )
            },
        )),
    }
}

/// From a base selector for B, builds the per-length score orders, merges
/// them into cumulative orders S_0 ... S_upto, and returns the selector
/// f(x, y) = the later of x, y in S_max(|x|,|y|), together with all orders.
/// The result's universe is capped at `upto`. Requires base a commutative
/// single-valued total selector for B (checked).
pub fn etime_selector(
    b: &TargetSet,
    base: &MultiMap,
    upto: u8,
    budget: u64,
) -> Result<(MultiMap, Vec<OrderList>), Error> {
    let op = "etime_selector";
    if upto > base.universe().max_len() {
        return Err(Error::invalid(
            op,
            format!("bound {upto} exceeds the base universe max length {}", base.universe().max_len()),
        ));
    }
    // the construction only ever queries the base within the bound
    precheck_selector(op, base, b, upto, budget)?;
    let mut score_cost = 0u64;
    for k in 0..=u32::from(upto) {
        score_cost += 1u64 << (2 * k);
    }
    check_budget(op, score_cost, budget)?;

    let u = Universe::new(upto)?;
    let mut orders: Vec<OrderList> = vec![OrderList::new(vec![Word::empty()])?];
    for n in 1..=upto {
        // L_n: ascending by (score under base, shortlex), which is exactly
        // the per-length order induced by the score-rebuilt selector
        let mut level: Vec<(u64, Word)> = Vec::new();
        for w in u.exact(n)? {
            level.push((score(base, w)?, w));
        }
        level.sort();
        let l = OrderList::new(level.into_iter().map(|(_, w)| w).collect())?;
        let merged = merge_orders(&orders[usize::from(n) - 1], &l, base)?;
        orders.push(merged);
    }

    // dense rank lookup per length: rank[m][shortlex_index(w)]
    let mut ranks: Vec<Vec<u32>> = Vec::with_capacity(orders.len());
    for s in &orders {
        let mut r = vec![0u32; s.len()];
        for (pos, &w) in s.words().iter().enumerate() {
            r[w.shortlex_index() as usize] = pos as u32;
        }
        ranks.push(r);
    }
    let f = MultiMap::from_rule(
        &format!("etime({},{upto})", base.name()),
        u,
        true,
        move |x, y| {
            let m = usize::from(x.len().max(y.len()));
            let rx = ranks[m][x.shortlex_index() as usize];
            let ry = ranks[m][y.shortlex_index() as usize];
            Ok(ValueSet::new(rx >= ry, ry > rx))
        },
    );
    Ok((f, orders))
}
