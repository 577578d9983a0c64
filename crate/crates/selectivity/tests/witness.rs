//! Scores, top strings, dominating and lexmax covers, and the printable
//! and hinted subset extractors.

mod common;

use common::{mask_set, priority_selector, random_set, rng, set_of, uni, upto_words, wd};
use rand_core::RngCore;
use selectivity::functions::{materialize, ValueSet};
use selectivity::samples::{
    ambiguous_total_triple, canonical_selector, partial_canonical_selector, sparse_partial_triple,
};
use selectivity::transforms::{etime_selector, score_selector};
use selectivity::witness::{
    dominating_cover, hinted_subset, lexmax_cover, printable_subset, score, top_string,
    CoverSource, HintSet, TopMethod, LEXMAX_COVER_MAX_LEN,
};
use selectivity::{Error, MultiMap, TargetSet, Word, DEFAULT_BUDGET};

#[test]
fn score_under_max_shortlex_is_the_slice_rank() {
    let u = uni(3);
    let f = MultiMap::max_shortlex(u);
    assert_eq!(score(&f, wd("-")).unwrap(), 1);
    assert_eq!(score(&f, wd("00")).unwrap(), 1);
    assert_eq!(score(&f, wd("01")).unwrap(), 2);
    assert_eq!(score(&f, wd("10")).unwrap(), 3);
    assert_eq!(score(&f, wd("11")).unwrap(), 4);
}

#[test]
fn scores_of_a_slice_form_a_permutation_of_the_ranks() {
    let mut r = rng(61);
    let u = uni(4);
    for _ in 0..30 {
        let b = random_set(u, &mut r);
        let f = priority_selector(u, &b, &mut r);
        for n in 0..=4u8 {
            let mut scores: Vec<u64> = u
                .exact(n)
                .unwrap()
                .map(|w| score(&f, w).unwrap())
                .collect();
            scores.sort_unstable();
            let want: Vec<u64> = (1..=1u64 << n).collect();
            assert_eq!(scores, want, "length {n}");
        }
    }
}

#[test]
fn score_requires_single_valued_totality_on_the_row() {
    let (sparse, [a, _, _]) = sparse_partial_triple().unwrap();
    assert!(matches!(score(&sparse, a), Err(Error::Precondition { .. })));
    // the row of b meets the two-valued cell (b, c)
    let (amb, [_, b, _]) = ambiguous_total_triple().unwrap();
    assert!(matches!(score(&amb, b), Err(Error::Precondition { .. })));
}

#[test]
fn top_string_of_max_shortlex_is_all_ones() {
    let u = uni(4);
    let f = MultiMap::max_shortlex(u);
    for n in 0..=4u8 {
        let want = Word::ones(n).unwrap();
        assert_eq!(top_string(&f, n, TopMethod::Scan).unwrap(), want);
        assert_eq!(top_string(&f, n, TopMethod::PrefixSearch).unwrap(), want);
    }
}

#[test]
fn both_top_string_methods_agree_on_seeded_selectors() {
    let mut r = rng(63);
    let u = uni(5);
    for _ in 0..50 {
        let b = random_set(u, &mut r);
        let f = priority_selector(u, &b, &mut r);
        for n in 0..=5u8 {
            let by_scan = top_string(&f, n, TopMethod::Scan).unwrap();
            let by_descent = top_string(&f, n, TopMethod::PrefixSearch).unwrap();
            assert_eq!(by_scan, by_descent, "length {n}");
            assert_eq!(score(&f, by_scan).unwrap(), 1u64 << n, "top scorer beats its slice");
        }
    }
}

#[test]
fn top_string_rejects_rows_without_a_full_winner() {
    // a cyclic length-2 slice is not associative, so neither method runs
    let u = uni(2);
    let f = MultiMap::from_rule("cycle", u, true, |x, y| {
        if x == y {
            return Ok(ValueSet::first_only());
        }
        // winners rotate 00 -> 01 -> 10 -> 00; 11 loses to everything
        let beats = |w: Word, v: Word| {
            w.len() == 2
                && v.len() == 2
                && w.bits() != 3
                && (v.bits() == 3 || (w.bits() + 2) % 3 == v.bits())
        };
        if beats(x, y) {
            Ok(ValueSet::first_only())
        } else if beats(y, x) {
            Ok(ValueSet::second_only())
        } else {
            Ok(ValueSet::new(x >= y, y >= x))
        }
    });
    assert!(matches!(top_string(&f, 2, TopMethod::Scan), Err(Error::Precondition { .. })));
    assert!(matches!(top_string(&f, 2, TopMethod::PrefixSearch), Err(Error::Precondition { .. })));
}

#[test]
fn dominating_cover_stays_within_the_bound_and_inside_the_members() {
    let mut r = rng(65);
    let u = uni(4);
    for _ in 0..60 {
        let b = random_set(u, &mut r);
        let f = priority_selector(u, &b, &mut r);
        for n in 0..=4u8 {
            if b.count_exact(n).unwrap() == 0 {
                assert!(dominating_cover(&f, &b, n).is_err());
                continue;
            }
            let cover = dominating_cover(&f, &b, n).unwrap();
            assert_eq!(cover.source, CoverSource::Greedy);
            assert!(cover.members.len() <= usize::from(n) + 1);
            assert!(cover.members.windows(2).all(|w| w[0] < w[1]));
            for &w in &cover.members {
                assert!(b.contains(w) && w.len() == n);
            }
            for x in u.exact(n).unwrap() {
                assert!(
                    cover
                        .members
                        .iter()
                        .any(|&y| f.eval_members(x, y).unwrap() == vec![y] || x == y),
                    "{x} is not dominated"
                );
            }
        }
    }
}

#[test]
fn dominating_cover_checks_its_preconditions() {
    let u = uni(2);
    let b = set_of(u, &["1", "11"]);
    assert!(matches!(
        dominating_cover(&MultiMap::min_shortlex(u), &b, 1),
        Err(Error::Precondition { .. })
    ));
    // two-valued cells on the slice are refused
    let pair = set_of(u, &["10", "11"]);
    let amb = selectivity::samples::ambiguous_selector(u, &pair);
    assert!(matches!(dominating_cover(&amb, &pair, 2), Err(Error::Precondition { .. })));
    // partiality off the members is tolerated: the cover still verifies
    let partial = partial_canonical_selector(u, &b);
    let cover = dominating_cover(&partial, &b, 1).unwrap();
    assert_eq!(cover.members, vec![wd("1")]);
    let f = canonical_selector(u, &b);
    assert!(matches!(dominating_cover(&f, &b, 2 + 1), Err(Error::Invalid { .. })));
}

#[test]
fn lexmax_cover_prefers_longer_codes() {
    // under max-shortlex every subset containing the slice maximum covers;
    // the descending-concatenation code rewards more members, so the full
    // slice wins while the bound permits it
    let u = uni(3);
    let f = MultiMap::max_shortlex(u);
    let c1 = lexmax_cover(&f, 1).unwrap().unwrap();
    assert_eq!(c1.members, vec![wd("0"), wd("1")]);
    assert_eq!(c1.source, CoverSource::LexMax);
    let c2 = lexmax_cover(&f, 2).unwrap().unwrap();
    assert_eq!(c2.members.len(), 3, "bound n + 1 caps the member count");
    assert!(c2.members.contains(&wd("11")));
}

#[test]
fn lexmax_cover_is_none_when_nothing_dominates() {
    let u = uni(1);
    let undef = MultiMap::from_rule("undef", u, true, |_, _| Ok(ValueSet::EMPTY));
    assert!(lexmax_cover(&undef, 1).unwrap().is_none());
}

#[test]
fn lexmax_cover_refuses_long_slices() {
    let u = uni(6);
    let f = MultiMap::max_shortlex(u);
    assert!(lexmax_cover(&f, LEXMAX_COVER_MAX_LEN + 1).is_err());
}

#[test]
fn lexmax_cover_meets_the_members_of_any_selected_set() {
    // exhaustive at length 2: every target set with a length-2 member,
    // under its canonical selector
    let u = uni(2);
    let all = upto_words(u, 2);
    for mask in 0..(1u64 << all.len()) {
        let b = mask_set(u, &all, mask);
        if b.count_exact(2).unwrap() == 0 {
            continue;
        }
        let f = canonical_selector(u, &b);
        let cover = lexmax_cover(&f, 2).unwrap().expect("total selectors always cover");
        assert!(
            cover.members.iter().any(|&w| b.contains(w)),
            "cover misses the members for mask {mask}"
        );
    }
    // seeded at lengths 3 and 4
    let mut r = rng(67);
    let u = uni(4);
    for _ in 0..40 {
        let b = random_set(u, &mut r);
        let f = priority_selector(u, &b, &mut r);
        for n in [3u8, 4] {
            if b.count_exact(n).unwrap() == 0 {
                continue;
            }
            let cover = lexmax_cover(&f, n).unwrap().expect("covers exist");
            assert!(cover.members.iter().any(|&w| b.contains(w)));
        }
    }
}

#[test]
fn printable_subset_returns_members_at_every_populated_length() {
    let mut r = rng(69);
    let u = uni(4);
    for _ in 0..30 {
        let b = random_set(u, &mut r);
        let f = priority_selector(u, &b, &mut r);
        for mode in [CoverSource::Greedy, CoverSource::LexMax] {
            let (found, queries) = printable_subset(&f, &b, 4, mode).unwrap();
            assert!(found.windows(2).all(|w| w[0] < w[1]));
            for &w in &found {
                assert!(b.contains(w));
            }
            for n in 0..=4u8 {
                if b.count_exact(n).unwrap() > 0 {
                    assert!(
                        found.iter().any(|w| w.len() == n),
                        "length {n} populated but nothing printed"
                    );
                }
            }
            // each cover holds at most n + 1 words
            assert!(queries <= (0..=4u64).map(|n| n + 1).sum::<u64>());
        }
    }
}

#[test]
fn printable_subset_rejects_non_selectors() {
    let u = uni(2);
    let b = set_of(u, &["1", "11"]);
    let f = MultiMap::min_shortlex(u);
    assert!(printable_subset(&f, &b, 2, CoverSource::Greedy).is_err());
    assert!(printable_subset(&f, &b, 2, CoverSource::LexMax).is_err());
}

#[test]
fn hinted_subset_returns_one_member_per_hinted_length() {
    let mut r = rng(71);
    let u = uni(4);
    for _ in 0..30 {
        // members at every even length, plus noise at odd lengths
        let mut words: Vec<Word> = Vec::new();
        for n in [2u8, 4] {
            let slice: Vec<Word> = u.exact(n).unwrap().collect();
            words.push(slice[(r.next_u64() % slice.len() as u64) as usize]);
        }
        words.push(wd("1"));
        let b = TargetSet::from_words(u, words).unwrap();
        let f = priority_selector(u, &b, &mut r);
        let hints = HintSet::evens();
        let found = hinted_subset(&f, &b, &hints, 4).unwrap();
        assert_eq!(found.len(), 2);
        for (i, &w) in found.iter().enumerate() {
            assert_eq!(w.len(), 2 * (i as u8 + 1));
            assert!(b.contains(w));
            assert_eq!(top_string(&f, w.len(), TopMethod::Scan).unwrap(), w);
        }
    }
}

#[test]
fn hinted_subset_enforces_the_hint_promise() {
    let u = uni(2);
    let b = set_of(u, &["1"]); // nothing at length 2
    let f = canonical_selector(u, &b);
    assert!(matches!(
        hinted_subset(&f, &b, &HintSet::evens(), 2),
        Err(Error::Precondition { .. })
    ));
    let fine = hinted_subset(&f, &b, &HintSet::odds(), 2).unwrap();
    assert_eq!(fine, vec![wd("1")]);
}

#[test]
fn hint_set_constructors() {
    assert_eq!(HintSet::evens().lengths(), vec![2, 4, 6, 8, 10, 12, 14, 16, 18, 20]);
    assert_eq!(HintSet::odds().lengths(), (1..=19).step_by(2).collect::<Vec<u8>>());
    assert_eq!(HintSet::all().lengths().len(), 20);
    assert!(!HintSet::all().contains(0), "the empty word is never hinted");
    let h = HintSet::from_lengths([3u8, 1]).unwrap();
    assert_eq!(h.lengths(), vec![1, 3]);
    assert!(HintSet::from_lengths([21u8]).is_err());
}

#[test]
fn cover_and_top_functions_compose_with_construction_outputs() {
    // the score and enumeration-time routes feed the witness extractors
    let u = uni(3);
    let b = set_of(u, &["1", "10", "11", "001"]);
    let base = canonical_selector(u, &b);
    let g = materialize(&score_selector(&base, &b, DEFAULT_BUDGET).unwrap()).unwrap();
    let (et, _) = etime_selector(&b, &base, 3, DEFAULT_BUDGET).unwrap();
    let et = materialize(&et).unwrap();
    for f in [&g, &et] {
        for n in 1..=3u8 {
            if b.count_exact(n).unwrap() == 0 {
                continue;
            }
            let cover = dominating_cover(f, &b, n).unwrap();
            assert!(!cover.members.is_empty());
            let top = top_string(f, n, TopMethod::Scan).unwrap();
            assert_eq!(top, top_string(f, n, TopMethod::PrefixSearch).unwrap());
        }
        let (found, _) = printable_subset(f, &b, 3, CoverSource::Greedy).unwrap();
        assert!(found.iter().all(|&w| b.contains(w)));
    }
}
