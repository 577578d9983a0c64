//! Per-length advice extraction and decoding.
//!
//! For each word length n, a selector's induced digraph on the target
//! slice has a distinguished source node (single-valued case) or source /
//! target clique (multivalued case). One flagged representative of length
//! exactly n + 1 bits is enough to decide membership of every length-n word
//! by a constant number of selector evaluations. This module extracts those
//! advice words, decodes them back, and verifies exact round trips.

use crate::digraph::{Digraph, ExtremalSide};
use crate::functions::is_selector_for;
use crate::report::{PropertyReport, Witness};
use crate::universe::{encode_pair, PairCode, Word};
use crate::{Error, MultiMap, TargetSet, DEFAULT_BUDGET};

/// Which decoder a package drives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdviceKind {
    /// Flagged source node of the target slice; decode by one evaluation.
    PSource,
    /// Flagged least member of the source clique; decode by one membership
    /// test of the evaluated value set.
    NpSourceClique,
    /// Flagged greatest member of the complement slice's target clique,
    /// with dedicated encodings for the empty and full slices.
    CoNpTargetClique,
    /// Rank-encoded source over all words up to n; decodes every length
    /// up to n, not just length n.
    StrongSource,
}

impl AdviceKind {
    /// Stable lowercase label used by the CLI.
    pub fn label(&self) -> &'static str {
        match self {
            AdviceKind::PSource => "p",
            AdviceKind::NpSourceClique => "np",
            AdviceKind::CoNpTargetClique => "conp",
            AdviceKind::StrongSource => "strong",
        }
    }
}

/// Which clique extraction `extract_clique_advice` performs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CliqueSide {
    /// Source clique of the target slice.
    Np,
    /// Target clique of the complement slice.
    CoNp,
}

/// One extracted advice word for one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvicePackage {
    pub n: u8,
    pub kind: AdviceKind,
    /// Always exactly n + 1 bits.
    pub advice: Word,
    /// Name of the selector the advice was extracted from.
    pub selector: String,
}

/// Advice for deciding length-n membership by evaluating f against a source
/// node. Plain: advice = 1·s with s the source of the induced digraph on
/// the length-n members, or 0^(n+1) when there are none. Strong: s is the
/// source over all members of length at most n, encoded as the (n+1)-bit
/// value shortlex_index(s) + 1, with 0 meaning no members; such advice
/// decodes every word of length at most n.
///
/// Requires f single-valued, total and a selector for B on the length-n
/// slice (strong: the up-to-n slice), and commutative and associative on
/// the slice's members (all checked).
pub fn extract_source_advice(
    f: &MultiMap,
    b: &TargetSet,
    n: u8,
    strong: bool,
) -> Result<AdvicePackage, Error> {
    let op = "extract_source_advice";
    let slice = slice_words(f, b, n, strong, op)?;
    precheck_slice(op, f, b, &slice, true)?;
    let members: Vec<Word> = slice.iter().copied().filter(|w| b.contains(*w)).collect();
    check_members(op, f, &members)?;
    let kind = if strong { AdviceKind::StrongSource } else { AdviceKind::PSource };
    if members.is_empty() {
        return package(f, n, kind, Word::zeros(n + 1)?);
    }
    let g = Digraph::induce(f, &members)?;
    let s = g.extremal_node(ExtremalSide::Source).ok_or_else(|| {
        Error::internal(op, "no source node although associativity holds".to_string())
    })?;
    let advice = if strong {
        Word::new(n + 1, s.shortlex_index() + 1)?
    } else {
        Word::new(1, 1)?.concat(s)?
    };
    package(f, n, kind, advice)
}

/// Advice for deciding length-n membership through a clique member.
/// Np: advice = 1·u with u the shortlex-least member of the source clique
/// on the length-n members, or 0^(n+1) when there are none. CoNp: 0^(n+1)
/// when there are no length-n members; the bare flag (1 at n = 0, 0·1^n
/// otherwise) when every length-n word is a member; else 1·v with v the
/// shortlex-greatest member of the target clique on the complement.
///
/// Requires f total, commutative and a selector for B on the length-n
/// slice, and associative on the relevant part: the members (Np) or the
/// complement (CoNp). Multivalued f is welcome.
pub fn extract_clique_advice(
    f: &MultiMap,
    b: &TargetSet,
    n: u8,
    side: CliqueSide,
) -> Result<AdvicePackage, Error> {
    let op = "extract_clique_advice";
    let slice = slice_words(f, b, n, false, op)?;
    precheck_slice(op, f, b, &slice, false)?;
    let members: Vec<Word> = slice.iter().copied().filter(|w| b.contains(*w)).collect();
    match side {
        CliqueSide::Np => {
            check_members(op, f, &members)?;
            if members.is_empty() {
                return package(f, n, AdviceKind::NpSourceClique, Word::zeros(n + 1)?);
            }
            let clique = source_or_target_clique(op, f, &members, ExtremalSide::Source)?;
            let u = clique.iter().copied().min().expect("clique is nonempty");
            package(f, n, AdviceKind::NpSourceClique, Word::new(1, 1)?.concat(u)?)
        }
        CliqueSide::CoNp => {
            if members.is_empty() {
                return package(f, n, AdviceKind::CoNpTargetClique, Word::zeros(n + 1)?);
            }
            let complement: Vec<Word> =
                slice.iter().copied().filter(|w| !b.contains(*w)).collect();
            if complement.is_empty() {
                // every length-n word is a member; at n = 0 the 0-prefixed
                // form would collide with the empty case, so the bare flag
                // carries the claim
                let advice =
                    if n == 0 { Word::new(1, 1)? } else { Word::zeros(1)?.concat(Word::ones(n)?)? };
                return package(f, n, AdviceKind::CoNpTargetClique, advice);
            }
            check_members(op, f, &complement)?;
            let clique = source_or_target_clique(op, f, &complement, ExtremalSide::Target)?;
            let v = clique.iter().copied().max().expect("clique is nonempty");
            package(f, n, AdviceKind::CoNpTargetClique, Word::new(1, 1)?.concat(v)?)
        }
    }
}

fn package(f: &MultiMap, n: u8, kind: AdviceKind, advice: Word) -> Result<AdvicePackage, Error> {
    if advice.len() != n + 1 {
        return Err(Error::internal(
            "advice::package",
            format!("advice {advice} has length {} instead of {}", advice.len(), n + 1),
        ));
    }
    Ok(AdvicePackage { n, kind, advice, selector: f.name().to_string() })
}

/// The words the advice for length n must decide: the length-n slice, or
/// everything up to n for strong advice.
fn slice_words(
    f: &MultiMap,
    b: &TargetSet,
    n: u8,
    strong: bool,
    op: &'static str,
) -> Result<Vec<Word>, Error> {
    let u = f.universe();
    if u != b.universe() {
        return Err(Error::invalid(op, "function and target set live in different universes"));
    }
    if n > u.max_len() {
        return Err(Error::invalid(op, format!("length {n} exceeds universe max {}", u.max_len())));
    }
    let words: Vec<Word> =
        if strong { u.upto(n)?.collect() } else { u.exact(n)?.collect() };
    let pairs = (words.len() as u64).pow(2);
    if pairs > DEFAULT_BUDGET {
        return Err(Error::Budget { op, needed: pairs, budget: DEFAULT_BUDGET });
    }
    Ok(words)
}

/// Totality (and single-valuedness if demanded) plus the selector property
/// over the slice.
fn precheck_slice(
    op: &'static str,
    f: &MultiMap,
    b: &TargetSet,
    slice: &[Word],
    single: bool,
) -> Result<(), Error> {
    let pairs = (slice.len() as u64).pow(2);
    for &x in slice {
        for &y in slice {
            let v = f.eval(x, y)?;
            if v.is_empty() {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail("total-on", f.name(), pairs, 0, Witness::UndefinedPair { x, y }),
                ));
            }
            if single && !v.fits_single(x, y) {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "single-valued-on",
                        f.name(),
                        pairs,
                        0,
                        Witness::MultiValued { x, y, value: v.members(x, y) },
                    ),
                ));
            }
        }
    }
    let sel = is_selector_for(f, b, slice)?;
    if !sel.pass {
        return Err(Error::precondition(op, sel));
    }
    Ok(())
}

/// Commutativity and associativity over the member list.
fn check_members(op: &'static str, f: &MultiMap, members: &[Word]) -> Result<(), Error> {
    for (i, &x) in members.iter().enumerate() {
        for &y in members.iter().skip(i + 1) {
            let xy = f.eval_members(x, y)?;
            let yx = f.eval_members(y, x)?;
            if xy != yx {
                return Err(Error::precondition(
                    op,
                    PropertyReport::fail(
                        "commutative-on",
                        f.name(),
                        (members.len() as u64).pow(2),
                        0,
                        Witness::NotCommutative { x, y, xy, yx },
                    ),
                ));
            }
        }
    }
    if !members.is_empty() {
        let assoc = crate::functions::is_associative_on(f, members)?;
        if !assoc.pass {
            return Err(Error::precondition(op, assoc));
        }
    }
    Ok(())
}

/// First or last condensation block. Associativity was already checked, so
/// a structural failure here is an internal error, not user error.
fn source_or_target_clique(
    op: &'static str,
    f: &MultiMap,
    vertices: &[Word],
    side: ExtremalSide,
) -> Result<Vec<Word>, Error> {
    let g = Digraph::induce(f, vertices)?;
    g.extremal_clique(side).map_err(|e| {
        Error::internal(op, format!("clique structure missing although associativity holds: {e}"))
    })
}

/// Applies the package's decoder to x: the membership claim the advice
/// makes about x. The claimed length must match: |x| = n, except strong
/// advice which accepts any |x| <= n.
pub fn decode(pkg: &AdvicePackage, x: Word, f: &MultiMap) -> Result<bool, Error> {
    let op = "decode";
    let length_ok = match pkg.kind {
        AdviceKind::StrongSource => x.len() <= pkg.n,
        _ => x.len() == pkg.n,
    };
    if !length_ok {
        return Err(Error::precondition(
            op,
            PropertyReport::fail(
                "decode-length",
                &pkg.selector,
                0,
                0,
                Witness::Split {
                    what: format!("x = {x} has length {} but the advice is for n = {}", x.len(), pkg.n),
                },
            ),
        ));
    }
    let a = pkg.advice;
    if a.len() != pkg.n + 1 {
        return Err(Error::invalid(op, format!("advice {a} is not {} bits", pkg.n + 1)));
    }
    let n = pkg.n;
    let suffix = Word::new(n, a.bits() & ((1u64 << n) - 1))?;
    match pkg.kind {
        AdviceKind::PSource => {
            if !a.bit(0) {
                if suffix.bits() != 0 {
                    return Err(Error::invalid(op, format!("malformed advice {a}: 0-flag with nonzero suffix")));
                }
                return Ok(false);
            }
            Ok(f.eval_members(x, suffix)? == vec![x])
        }
        AdviceKind::NpSourceClique => {
            if !a.bit(0) {
                if suffix.bits() != 0 {
                    return Err(Error::invalid(op, format!("malformed advice {a}: 0-flag with nonzero suffix")));
                }
                return Ok(false);
            }
            Ok(f.eval(suffix, x)?.contains(suffix, x, x))
        }
        AdviceKind::CoNpTargetClique => {
            if !a.bit(0) {
                if n > 0 && suffix == Word::ones(n)? {
                    return Ok(true);
                }
                if suffix.bits() != 0 {
                    return Err(Error::invalid(op, format!("malformed advice {a}: 0-flag with mixed suffix")));
                }
                return Ok(false);
            }
            if n == 0 {
                // bare flag: the whole (one-word) slice is claimed inside
                return Ok(true);
            }
            Ok(!f.eval(x, suffix)?.contains(x, suffix, suffix))
        }
        AdviceKind::StrongSource => {
            let value = a.bits();
            if value == 0 {
                return Ok(false);
            }
            let s = Word::from_shortlex_index(value - 1)?;
            if s.len() > n {
                return Err(Error::invalid(op, format!("malformed advice {a}: names a word longer than {n}")));
            }
            Ok(f.eval_members(x, s)? == vec![x])
        }
    }
}

/// Re-extracts advice for every length up to `upto` and decodes every word
/// of that length (strong: every word up to that length); passes iff every
/// decoded claim equals actual membership. Extractor preconditions
/// propagate as errors.
pub fn verify_roundtrip(
    f: &MultiMap,
    b: &TargetSet,
    upto: u8,
    kind: AdviceKind,
) -> Result<PropertyReport, Error> {
    let u = f.universe();
    if upto > u.max_len() {
        return Err(Error::invalid(
            "verify_roundtrip",
            format!("bound {upto} exceeds universe max {}", u.max_len()),
        ));
    }
    let mut checked = 0u64;
    for n in 0..=upto {
        let pkg = match kind {
            AdviceKind::PSource => extract_source_advice(f, b, n, false)?,
            AdviceKind::StrongSource => extract_source_advice(f, b, n, true)?,
            AdviceKind::NpSourceClique => extract_clique_advice(f, b, n, CliqueSide::Np)?,
            AdviceKind::CoNpTargetClique => extract_clique_advice(f, b, n, CliqueSide::CoNp)?,
        };
        if pkg.advice.len() != n + 1 {
            return Err(Error::internal(
                "verify_roundtrip",
                format!("advice {} has length {} instead of {}", pkg.advice, pkg.advice.len(), n + 1),
            ));
        }
        let words: Vec<Word> = if kind == AdviceKind::StrongSource {
            u.upto(n)?.collect()
        } else {
            u.exact(n)?.collect()
        };
        for x in words {
            checked += 1;
            let claim = decode(&pkg, x, f)?;
            let actual = b.contains(x);
            if claim != actual {
                return Ok(PropertyReport::fail(
                    "advice-roundtrip",
                    f.name(),
                    checked,
                    0,
                    Witness::DecodeMismatch { x, advice: pkg.advice, expected: actual },
                ));
            }
        }
    }
    Ok(PropertyReport::pass("advice-roundtrip", f.name(), checked, 0))
}

/// The pair codes the decoder accepts for this package, ascending, at most
/// `limit` of them: every (x, advice) with a true claim, encoded.
pub fn decoder_members(
    pkg: &AdvicePackage,
    f: &MultiMap,
    limit: usize,
) -> Result<Vec<PairCode>, Error> {
    let u = f.universe();
    let words: Vec<Word> = if pkg.kind == AdviceKind::StrongSource {
        u.upto(pkg.n)?.collect()
    } else {
        u.exact(pkg.n)?.collect()
    };
    let mut out = Vec::new();
    for x in words {
        if out.len() >= limit {
            break;
        }
        if decode(pkg, x, f)? {
            out.push(encode_pair(x, pkg.advice)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{TableBuilder, ValueSet};
    use crate::universe::Universe;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn set(u: Universe, words: &[&str]) -> TargetSet {
        TargetSet::from_words(u, words.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn source_advice_examples() {
        let u = Universe::new(3).unwrap();
        let f = MultiMap::max_shortlex(u);
        let b = set(u, &["01", "10", "11"]);
        let pkg = extract_source_advice(&f, &b, 2, false).unwrap();
        assert_eq!(pkg.advice, w("101"));
        assert_eq!(pkg.kind, AdviceKind::PSource);
        // an empty slice yields the all-zero advice
        let pkg = extract_source_advice(&f, &b, 3, false).unwrap();
        assert_eq!(pkg.advice, w("0000"));
        assert!(!decode(&pkg, w("110"), &f).unwrap());
    }

    #[test]
    fn source_decode_examples() {
        let u = Universe::new(2).unwrap();
        let f = MultiMap::max_shortlex(u);
        let b = set(u, &["01", "10", "11"]);
        let pkg = extract_source_advice(&f, &b, 2, false).unwrap();
        assert!(decode(&pkg, w("10"), &f).unwrap());
        assert!(!decode(&pkg, w("00"), &f).unwrap());
        assert!(decode(&pkg, w("01"), &f).unwrap());
        assert!(matches!(decode(&pkg, w("0"), &f), Err(Error::Precondition { .. })));
    }

    #[test]
    fn strong_source_scan_finds_least_member_under_maxlex() {
        // the source over {1, 01, 10, 11} under maxlex is 1: the least
        // member loses to every other member
        let u = Universe::new(2).unwrap();
        let f = MultiMap::max_shortlex(u);
        let members = vec![w("1"), w("01"), w("10"), w("11")];
        let g = Digraph::induce(&f, &members).unwrap();
        assert_eq!(g.extremal_node(ExtremalSide::Source), Some(w("1")));
        // that set is not closed upward across lengths, so the full strong
        // extraction refuses: maxlex strays outside it on (00, 1)
        let b = set(u, &["1", "01", "10", "11"]);
        let err = extract_source_advice(&f, &b, 2, true).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }), "{err}");
    }

    #[test]
    fn strong_advice_roundtrip_on_threshold_set() {
        // all words shortlex-at-or-above 11: the one shape maxlex can
        // select across lengths
        let u = Universe::new(3).unwrap();
        let f = MultiMap::max_shortlex(u);
        let members: Vec<Word> = u.words().filter(|x| *x >= w("11")).collect();
        let b = TargetSet::from_words(u, members).unwrap();
        let pkg = extract_source_advice(&f, &b, 3, true).unwrap();
        // source over the members is 11; rank encoding in four bits
        assert_eq!(pkg.advice.bits(), w("11").shortlex_index() + 1);
        for x in u.words() {
            assert_eq!(decode(&pkg, x, &f).unwrap(), b.contains(x), "x={x}");
        }
        let rep = verify_roundtrip(&f, &b, 3, AdviceKind::StrongSource).unwrap();
        assert!(rep.pass, "{}", rep.one_line());
    }

    #[test]
    fn clique_advice_examples() {
        // two mutually selected members form the source clique; the least is 0
        let u = Universe::new(1).unwrap();
        let mut t = TableBuilder::new(u, false).unwrap();
        t.fill_diagonal().unwrap();
        t.set(w("0"), w("1"), ValueSet::both()).unwrap();
        t.set(w("1"), w("0"), ValueSet::both()).unwrap();
        t.set(Word::empty(), w("0"), ValueSet::both()).unwrap();
        t.set(w("0"), Word::empty(), ValueSet::both()).unwrap();
        t.set(Word::empty(), w("1"), ValueSet::both()).unwrap();
        t.set(w("1"), Word::empty(), ValueSet::both()).unwrap();
        let f = t.build("pairs");
        let b = set(u, &["0", "1"]);
        let pkg = extract_clique_advice(&f, &b, 1, CliqueSide::Np).unwrap();
        assert_eq!(pkg.advice, w("10"));
        assert!(decode(&pkg, w("0"), &f).unwrap());
        assert!(decode(&pkg, w("1"), &f).unwrap());
    }

    #[test]
    fn conp_advice_examples() {
        let u = Universe::new(2).unwrap();
        let f = MultiMap::max_shortlex(u);
        let full = set(u, &["00", "01", "10", "11"]);
        let pkg = extract_clique_advice(&f, &full, 2, CliqueSide::CoNp).unwrap();
        assert_eq!(pkg.advice, w("011"));
        for x in u.exact(2).unwrap() {
            assert!(decode(&pkg, x, &f).unwrap());
        }

        let b = set(u, &["01", "10", "11"]);
        let pkg = extract_clique_advice(&f, &b, 2, CliqueSide::CoNp).unwrap();
        assert_eq!(pkg.advice, w("100"));
        assert!(!decode(&pkg, w("00"), &f).unwrap());
        assert!(decode(&pkg, w("01"), &f).unwrap());
    }

    #[test]
    fn conp_length_zero_cases() {
        let u = Universe::new(1).unwrap();
        let f = MultiMap::max_shortlex(u);
        let with_empty = set(u, &["-", "1"]);
        let pkg = extract_clique_advice(&f, &with_empty, 0, CliqueSide::CoNp).unwrap();
        assert_eq!(pkg.advice, w("1"));
        assert!(decode(&pkg, Word::empty(), &f).unwrap());
        let without = set(u, &["1"]);
        let pkg = extract_clique_advice(&f, &without, 0, CliqueSide::CoNp).unwrap();
        assert_eq!(pkg.advice, w("0"));
        assert!(!decode(&pkg, Word::empty(), &f).unwrap());
    }

    #[test]
    fn roundtrip_upward_closed_set_under_maxlex() {
        let u = Universe::new(3).unwrap();
        let f = MultiMap::max_shortlex(u);
        // upward closed within each length, so maxlex is a selector for it
        // on every length slice (the per-length kinds never cross lengths)
        let b = set(u, &["-", "1", "11", "110", "111"]);
        for kind in
            [AdviceKind::PSource, AdviceKind::NpSourceClique, AdviceKind::CoNpTargetClique]
        {
            let rep = verify_roundtrip(&f, &b, 3, kind).unwrap();
            assert!(rep.pass, "{kind:?}: {}", rep.one_line());
        }
    }

    #[test]
    fn decoder_members_are_flagged_pairs() {
        let u = Universe::new(2).unwrap();
        let f = MultiMap::max_shortlex(u);
        let b = set(u, &["01", "10", "11"]);
        let pkg = extract_source_advice(&f, &b, 2, false).unwrap();
        let members = decoder_members(&pkg, &f, 10).unwrap();
        assert_eq!(members.len(), 3);
        let decoded: Vec<Word> =
            members.iter().map(|c| crate::universe::decode_pair(*c).unwrap().0).collect();
        assert_eq!(decoded, vec![w("01"), w("10"), w("11")]);
    }
}
