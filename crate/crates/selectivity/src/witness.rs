//! Score-based and cover-based membership witnesses: the per-length score
//! function, the unique top-scoring word (found two independent ways),
//! small dominating covers, and the printable- and hinted-subset pipelines
//! built from them.

use crate::digraph::Digraph;
use crate::functions::is_selector_for;
use crate::report::{PropertyReport, Witness};
use crate::universe::{prefix_search, Word, MAX_UNIVERSE_LEN};
use crate::{Error, MultiMap, TargetSet, DEFAULT_BUDGET};

/// A set of hinted word lengths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HintSet {
    mask: u32,
}

impl HintSet {
    pub fn from_lengths<I: IntoIterator<Item = u8>>(lengths: I) -> Result<HintSet, Error> {
        let mut mask = 0u32;
        for n in lengths {
            if n > MAX_UNIVERSE_LEN {
                return Err(Error::invalid(
                    "HintSet::from_lengths",
                    format!("length {n} exceeds {MAX_UNIVERSE_LEN}"),
                ));
            }
            mask |= 1 << n;
        }
        Ok(HintSet { mask })
    }

    /// Positive even lengths. Length 0 is never hinted by the built-ins.
    pub fn evens() -> HintSet {
        HintSet { mask: (2..=MAX_UNIVERSE_LEN).step_by(2).fold(0, |m, n| m | 1 << n) }
    }

    /// Positive odd lengths.
    pub fn odds() -> HintSet {
        HintSet { mask: (1..=MAX_UNIVERSE_LEN).step_by(2).fold(0, |m, n| m | 1 << n) }
    }

    /// Every positive length.
    pub fn all() -> HintSet {
        HintSet { mask: (1..=MAX_UNIVERSE_LEN).fold(0, |m, n| m | 1 << n) }
    }

    pub fn contains(&self, n: u8) -> bool {
        n <= MAX_UNIVERSE_LEN && self.mask >> n & 1 == 1
    }

    /// Hinted lengths, ascending.
    pub fn lengths(&self) -> Vec<u8> {
        (0..=MAX_UNIVERSE_LEN).filter(|n| self.contains(*n)).collect()
    }
}

/// How a cover was produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoverSource {
    Greedy,
    LexMax,
}

/// A small set of length-n words that collectively beat every length-n
/// word: for every x of length n some member y has y in set-f(x, y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub n: u8,
    /// Ascending.
    pub members: Vec<Word>,
    pub source: CoverSource,
}

/// How `top_string` locates the top scorer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TopMethod {
    /// Exhaustive argmax over the length slice.
    Scan,
    /// Prefix tree descent driven by a brute-force does-some-extension-
    /// reach-the-maximum oracle.
    PrefixSearch,
}

/// How many same-length words x beats outright: the size of
/// {z of length |x| : set-f(x, z) = {x}}, z = x included. Undefined or
/// two-member values encountered on the scanned row are precondition
/// errors.
pub fn score(f: &MultiMap, x: Word) -> Result<u64, Error> {
    let op = "score";
    let n = x.len();
    f.universe().require(x)?;
    let mut count = 0;
    for z in f.universe().exact(n)? {
        let members = f.eval_members(x, z)?;
        match members.len() {
            0 => {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "total-at-length",
                        f.name(),
                        0,
                        0,
                        Witness::AtLength { n, inner: Box::new(Witness::UndefinedPair { x, y: z }) },
                    ),
                ))
            }
            1 => {
                if members[0] == x {
                    count += 1;
                }
            }
            _ => {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        0,
                        0,
                        Witness::MultiValued { x, y: z, value: members },
                    ),
                ))
            }
        }
    }
    Ok(count)
}

/// The unique length-n word that beats all of its length slice (score
/// 2^n). Requires f single-valued, commutative, total and associative on
/// the slice (checked). Both methods must find the same word; a missing or
/// duplicated top scorer after the checks pass is an internal error.
pub fn top_string(f: &MultiMap, n: u8, method: TopMethod) -> Result<Word, Error> {
    let op = "top_string";
    let u = f.universe();
    if n > u.max_len() {
        return Err(Error::invalid(op, format!("length {n} exceeds universe max {}", u.max_len())));
    }
    let needed = 1u64 << (3 * u32::from(n)).min(63);
    if needed > DEFAULT_BUDGET {
        return Err(Error::Budget { op, needed, budget: DEFAULT_BUDGET });
    }
    let d: Vec<Word> = u.exact(n)?.collect();
    let [total, comm, single] = crate::functions::check_basic(f, &d)?;
    for rep in [total, comm, single] {
        if !rep.pass {
            return Err(Error::precondition(op, rep));
        }
    }
    let assoc = crate::functions::is_associative_on(f, &d)?;
    if !assoc.pass {
        return Err(Error::precondition(op, assoc));
    }

    let target = 1u64 << n;
    match method {
        TopMethod::Scan => {
            let mut tops = Vec::new();
            for &x in &d {
                if score(f, x)? == target {
                    tops.push(x);
                }
            }
            match tops.as_slice() {
                [top] => Ok(*top),
                _ => Err(Error::internal(
                    op,
                    format!("{} words of length {n} reach the top score", tops.len()),
                )),
            }
        }
        TopMethod::PrefixSearch => {
            // oracle: some extension of the prefix reaches the top score
            let mut pred = |p: Word| -> Result<bool, Error> {
                let rest = n - p.len();
                for bits in 0..(1u64 << rest) {
                    if score(f, p.concat(Word::new(rest, bits)?)?)? == target {
                        return Ok(true);
                    }
                }
                Ok(false)
            };
            match prefix_search(n, &mut pred)? {
                Some(w) => Ok(w),
                None => Err(Error::internal(op, format!("no word of length {n} reaches the top score"))),
            }
        }
    }
}

/// A greedy dominating cover of the length-n slice, drawn from the length-n
/// members of B: at most n + 1 words such that every length-n word loses to
/// one of them. Requires f single-valued on the slice and a selector for B
/// there, and a nonempty length-n member slice (all checked); the induced
/// member digraph must be a transitive tournament (checked downstream).
pub fn dominating_cover(f: &MultiMap, b: &TargetSet, n: u8) -> Result<CoverWitness, Error> {
    let op = "dominating_cover";
    let u = f.universe();
    if u != b.universe() {
        return Err(Error::invalid(op, "function and target set live in different universes"));
    }
    if n > u.max_len() {
        return Err(Error::invalid(op, format!("length {n} exceeds universe max {}", u.max_len())));
    }
    let needed = 1u64 << (2 * u32::from(n)).min(63);
    if needed > DEFAULT_BUDGET {
        return Err(Error::Budget { op, needed, budget: DEFAULT_BUDGET });
    }
    let members = b.members_exact(n)?;
    if members.is_empty() {
        return Err(Error::precondition(
            op,
            PropertyReport::fail(
                "slice-nonempty",
                f.name(),
                0,
                0,
                Witness::AtLength { n, inner: Box::new(Witness::Split { what: "no members at this length".into() }) },
            ),
        ));
    }
    let d: Vec<Word> = u.exact(n)?.collect();
    for &x in &d {
        for &y in &d {
            let v = f.eval(x, y)?;
            if !v.fits_single(x, y) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        (d.len() * d.len()) as u64,
                        0,
                        Witness::MultiValued { x, y, value: v.members(x, y) },
                    ),
                ));
            }
        }
    }
    let sel = is_selector_for(f, b, &d)?;
    if !sel.pass {
        return Err(Error::precondition(op, sel));
    }
    let g = Digraph::induce(f, &members)?;
    let mut cover = g.dominating_set()?;
    cover.sort();
    if cover.len() > usize::from(n) + 1 {
        return Err(Error::internal(
            op,
            format!("cover of {} words exceeds the bound {}", cover.len(), n + 1),
        ));
    }
    verify_cover(op, f, n, &cover)?;
    Ok(CoverWitness { n, members: cover, source: CoverSource::Greedy })
}

/// Every length-n word must lose to some cover member.
fn verify_cover(op: &'static str, f: &MultiMap, n: u8, cover: &[Word]) -> Result<(), Error> {
    for x in f.universe().exact(n)? {
        let mut covered = false;
        for &y in cover {
            if f.eval(x, y)?.contains(x, y, y) {
                covered = true;
                break;
            }
        }
        if !covered {
            return Err(Error::internal(op, format!("cover fails to dominate {x}")));
        }
    }
    Ok(())
}

/// Combinatorial guard for `lexmax_cover`.
pub const LEXMAX_COVER_MAX_LEN: u8 = 5;

/// Among all covers of the length-n slice with at most n + 1 members, the
/// one whose descending-concatenation code is shortlex-largest, or None
/// when no such cover exists. Requires f single-valued on the slice
/// (partial allowed) and n at most 5; longer slices are refused with a
/// pointer to `dominating_cover`.
pub fn lexmax_cover(f: &MultiMap, n: u8) -> Result<Option<CoverWitness>, Error> {
    let op = "lexmax_cover";
    let u = f.universe();
    if n > LEXMAX_COVER_MAX_LEN {
        return Err(Error::invalid(
            op,
            format!("length {n} exceeds the enumeration guard {LEXMAX_COVER_MAX_LEN}; use dominating_cover"),
        ));
    }
    if n > u.max_len() {
        return Err(Error::invalid(op, format!("length {n} exceeds universe max {}", u.max_len())));
    }
    let d: Vec<Word> = u.exact(n)?.collect();
    // beat_mask[i]: which slice positions lose to word i
    let mut beat_mask = vec![0u64; d.len()];
    for (i, &y) in d.iter().enumerate() {
        for (j, &x) in d.iter().enumerate() {
            let v = f.eval(x, y)?;
            if !v.fits_single(x, y) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        (d.len() * d.len()) as u64,
                        0,
                        Witness::MultiValued { x, y, value: v.members(x, y) },
                    ),
                ));
            }
            if v.contains(x, y, y) {
                beat_mask[i] |= 1 << j;
            }
        }
    }
    let full: u64 = if d.len() == 64 { u64::MAX } else { (1u64 << d.len()) - 1 };
    let jmax = (usize::from(n) + 1).min(d.len());
    // larger sets always have longer (so shortlex-larger) codes; within one
    // size, picking members greatest-first yields codes in descending order
    for j in (1..=jmax).rev() {
        let mut picked: Vec<usize> = Vec::with_capacity(j);
        if let Some(found) = descend(&beat_mask, full, d.len(), j, &mut picked) {
            let members: Vec<Word> = found.iter().map(|&i| d[i]).rev().collect();
            return Ok(Some(CoverWitness { n, members, source: CoverSource::LexMax }));
        }
    }
    Ok(None)
}

/// Depth-first search over descending index choices; returns the first
/// (hence code-largest) j-subset whose beat masks union to full coverage.
fn descend(
    beat_mask: &[u64],
    full: u64,
    len: usize,
    want: usize,
    picked: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if picked.len() == want {
        let union = picked.iter().fold(0u64, |m, &i| m | beat_mask[i]);
        return if union == full { Some(picked.clone()) } else { None };
    }
    let start = picked.last().map_or(len, |&i| i);
    for i in (0..start).rev() {
        // enough smaller indices must remain to fill the set
        if i + 1 < want - picked.len() {
            break;
        }
        picked.push(i);
        if let Some(found) = descend(beat_mask, full, len, want, picked) {
            return Some(found);
        }
        picked.pop();
    }
    None
}

/// Per length up to `upto`: compute a cover (greedy covers need a nonempty
/// member slice; lexmax covers may not exist), probe each cover member for
/// membership, and keep the members. Returns the union and the number of
/// membership probes (the cover sizes summed). Whenever the member slice
/// is nonempty, the kept part must be too; a miss is an internal error for
/// greedy covers and for lexmax covers after the selector check.
pub fn printable_subset(
    f: &MultiMap,
    b: &TargetSet,
    upto: u8,
    mode: CoverSource,
) -> Result<(Vec<Word>, u64), Error> {
    let op = "printable_subset";
    let u = f.universe();
    if u != b.universe() {
        return Err(Error::invalid(op, "function and target set live in different universes"));
    }
    if upto > u.max_len() {
        return Err(Error::invalid(op, format!("bound {upto} exceeds universe max {}", u.max_len())));
    }
    let mut out: Vec<Word> = Vec::new();
    let mut queries = 0u64;
    for i in 0..=upto {
        let cover = match mode {
            CoverSource::Greedy => {
                if b.count_exact(i)? == 0 {
                    continue;
                }
                dominating_cover(f, b, i)?
            }
            CoverSource::LexMax => {
                let d: Vec<Word> = u.exact(i)?.collect();
                let sel = is_selector_for(f, b, &d)?;
                if !sel.pass {
                    return Err(Error::precondition(op, sel));
                }
                match lexmax_cover(f, i)? {
                    Some(c) => c,
                    None => continue,
                }
            }
        };
        queries += cover.members.len() as u64;
        let kept: Vec<Word> = cover.members.iter().copied().filter(|w| b.contains(*w)).collect();
        if kept.is_empty() && b.count_exact(i)? > 0 {
            return Err(Error::internal(
                op,
                format!("cover at length {i} misses every member although the slice is populated"),
            ));
        }
        out.extend(kept);
    }
    out.sort();
    out.dedup();
    Ok((out, queries))
}

/// At every hinted length up to `upto`, the unique top scorer, which must
/// be a member. Requires the hint promise (a populated member slice at
/// every hinted length), plus `top_string`'s preconditions and the
/// selector property per hinted slice (all checked).
pub fn hinted_subset(
    f: &MultiMap,
    b: &TargetSet,
    hints: &HintSet,
    upto: u8,
) -> Result<Vec<Word>, Error> {
    let op = "hinted_subset";
    let u = f.universe();
    if u != b.universe() {
        return Err(Error::invalid(op, "function and target set live in different universes"));
    }
    if upto > u.max_len() {
        return Err(Error::invalid(op, format!("bound {upto} exceeds universe max {}", u.max_len())));
    }
    let mut out = Vec::new();
    for i in 0..=upto {
        if !hints.contains(i) {
            continue;
        }
        if b.count_exact(i)? == 0 {
            return Err(Error::precondition(
                op,
                PropertyReport::fail(
                    "hint-promise",
                    f.name(),
                    0,
                    0,
                    Witness::AtLength {
                        n: i,
                        inner: Box::new(Witness::Split { what: "hinted length has no members".into() }),
                    },
                ),
            ));
        }
        let d: Vec<Word> = u.exact(i)?.collect();
        let sel = is_selector_for(f, b, &d)?;
        if !sel.pass {
            return Err(Error::precondition(op, sel));
        }
        let top = top_string(f, i, TopMethod::Scan)?;
        if !b.contains(top) {
            return Err(Error::internal(
                op,
                format!("top scorer {top} at hinted length {i} is not a member"),
            ));
        }
        out.push(top);
    }
    Ok(out)
}
