//! Word order, enumeration, pairing, set codes and prefix search.

mod common;

use std::cmp::Ordering;

use common::{rng, uni, wd};
use proptest::prelude::*;
use rand_core::RngCore;
use selectivity::universe::{
    decode_pair, encode_pair, prefix_search, setcode, setcode_inv, shortlex_compare,
};
use selectivity::{Error, Word};

#[test]
fn shortlex_examples() {
    assert_eq!(shortlex_compare(wd("-"), wd("0")), Ordering::Less);
    assert_eq!(shortlex_compare(wd("10"), wd("01")), Ordering::Greater);
    assert_eq!(shortlex_compare(wd("1"), wd("00")), Ordering::Less);
    assert_eq!(shortlex_compare(wd("11"), wd("11")), Ordering::Equal);
}

#[test]
fn shortlex_is_a_total_order() {
    // transitive, antisymmetric, total: exhaustive over Σ^{≤5} triples
    let u = uni(5);
    let all: Vec<Word> = u.words().collect();
    for &a in &all {
        for &b in &all {
            let ab = shortlex_compare(a, b);
            assert_eq!(ab, shortlex_compare(b, a).reverse());
            assert_eq!(ab == Ordering::Equal, a == b);
        }
    }
    // transitivity via the index map: compare must agree with position
    for (i, &a) in all.iter().enumerate() {
        for (j, &b) in all.iter().enumerate() {
            assert_eq!(shortlex_compare(a, b), i.cmp(&j));
        }
    }
}

#[test]
fn enumeration_examples() {
    let u = uni(2);
    let exact1: Vec<Word> = u.exact(1).unwrap().collect();
    assert_eq!(exact1, vec![wd("0"), wd("1")]);
    let upto1: Vec<Word> = u.upto(1).unwrap().collect();
    assert_eq!(upto1, vec![wd("-"), wd("0"), wd("1")]);
    let exact2: Vec<Word> = u.exact(2).unwrap().collect();
    assert_eq!(exact2, vec![wd("00"), wd("01"), wd("10"), wd("11")]);
    assert!(u.exact(3).is_err(), "beyond maxLen must be a range error");
}

#[test]
fn enumeration_counts() {
    for max in 0..=8u8 {
        let u = uni(max);
        assert_eq!(u.count(), (1u64 << (max + 1)) - 1);
        for n in 0..=max {
            assert_eq!(u.exact(n).unwrap().count() as u64, 1u64 << n);
            assert_eq!(u.upto(n).unwrap().count() as u64, (1u64 << (n + 1)) - 1);
        }
    }
}

#[test]
fn pairing_examples() {
    let code = encode_pair(wd("0"), wd("11")).unwrap();
    assert_eq!(code.word(), wd("10011"));
    assert_eq!(encode_pair(wd("-"), wd("-")).unwrap().word(), wd("0"));
    let (x, w) = decode_pair(code).unwrap();
    assert_eq!((x, w), (wd("0"), wd("11")));
    // encoded length = 2|x| + 1 + |w|
    let c = encode_pair(wd("101"), wd("0")).unwrap();
    assert_eq!(c.word().len(), 2 * 3 + 1 + 1);
}

#[test]
fn pairing_rejects_malformed_codes() {
    // no 0 after the unary prefix
    let all_ones = selectivity::PairCode::from_word(wd("111"));
    assert!(decode_pair(all_ones).is_err());
    // remainder shorter than |x|
    let short = selectivity::PairCode::from_word(wd("110"));
    assert!(decode_pair(short).is_err());
}

#[test]
fn setcode_examples() {
    assert_eq!(setcode(&[wd("01"), wd("11")]).unwrap(), wd("1101"));
    assert_eq!(setcode(&[wd("0")]).unwrap(), wd("0"));
    assert_eq!(setcode(&[wd("-")]).unwrap(), wd("-"));
    assert_eq!(setcode_inv(wd("1101"), 2).unwrap(), vec![wd("01"), wd("11")]);
    // code length = n * |Y|
    assert_eq!(setcode(&[wd("000"), wd("010"), wd("111")]).unwrap().len(), 9);
}

#[test]
fn setcode_rejects_malformed_input() {
    assert!(setcode(&[]).is_err());
    assert!(setcode(&[wd("0"), wd("11")]).is_err(), "mixed lengths");
    assert!(setcode(&[wd("0"), wd("0")]).is_err(), "duplicate member");
    assert!(setcode_inv(wd("110"), 2).is_err(), "length not a multiple of n");
    assert!(setcode_inv(wd("0111"), 2).is_err(), "blocks not strictly descending");
}

#[test]
fn prefix_search_frozen_trace() {
    // the unique satisfier 01: calls go ε, 1 (dead), 0, 01
    let target = wd("01");
    let mut calls: Vec<Word> = Vec::new();
    let found = prefix_search(2, &mut |p| {
        calls.push(p);
        Ok(p.is_prefix_of(target))
    })
    .unwrap();
    assert_eq!(found, Some(target));
    assert_eq!(calls, vec![wd("-"), wd("1"), wd("0"), wd("01")]);
    assert!(calls.len() as u64 <= 2 * 2 + 1);
}

#[test]
fn prefix_search_prefers_the_largest_satisfier() {
    // property: second bit is 1; the lex-largest satisfier is 11
    let found = prefix_search(2, &mut |p| {
        Ok(uni(2)
            .exact(2)
            .unwrap()
            .any(|w| p.is_prefix_of(w) && w.bit(1)))
    })
    .unwrap();
    assert_eq!(found, Some(wd("11")));
}

#[test]
fn prefix_search_none_when_root_fails() {
    let mut calls = 0u64;
    let found = prefix_search(4, &mut |_| {
        calls += 1;
        Ok(false)
    })
    .unwrap();
    assert_eq!(found, None);
    assert_eq!(calls, 1);
}

#[test]
fn prefix_search_propagates_predicate_errors() {
    let out = prefix_search(2, &mut |_| Err(Error::invalid("test", "boom")));
    assert!(out.is_err());
}

#[test]
fn prefix_search_equals_max_of_the_set() {
    // predicate "some extension lies in S" finds max_shortlex(S), within
    // the call budget, over seeded random nonempty S at several lengths
    let mut r = rng(11);
    for n in 1..=6u8 {
        let u = uni(n);
        for _ in 0..50 {
            let members: Vec<Word> = u
                .exact(n)
                .unwrap()
                .filter(|_| r.next_u32() % 4 == 0)
                .collect();
            if members.is_empty() {
                continue;
            }
            let expect = *members.iter().max().unwrap();
            let mut calls = 0u64;
            let found = prefix_search(n, &mut |p| {
                calls += 1;
                Ok(members.iter().any(|w| p.is_prefix_of(*w)))
            })
            .unwrap();
            assert_eq!(found, Some(expect));
            assert!(calls <= 2 * u64::from(n) + 1, "budget exceeded: {calls} calls");
        }
    }
}

#[test]
fn word_index_roundtrip_and_order() {
    let u = uni(6);
    for (i, w) in u.words().enumerate() {
        assert_eq!(w.shortlex_index(), i as u64);
        assert_eq!(Word::from_shortlex_index(i as u64).unwrap(), w);
        assert_eq!(u.word_at(i as u64).unwrap(), w);
        assert_eq!(u.index(w).unwrap(), i);
    }
}

#[test]
fn word_text_form_uses_dash_for_the_empty_word() {
    assert_eq!(wd("-").to_string(), "-");
    assert_eq!(wd("0110").to_string(), "0110");
    assert_eq!("-".parse::<Word>().unwrap(), Word::empty());
    assert!("012".parse::<Word>().is_err());
}

proptest! {
    #[test]
    fn pairing_roundtrip(xi in 0u64..511, wi in 0u64..511) {
        // all words up to length 8 on both slots
        let x = Word::from_shortlex_index(xi).unwrap();
        let w = Word::from_shortlex_index(wi).unwrap();
        prop_assume!(2 * u16::from(x.len()) + 1 + u16::from(w.len()) <= 63);
        let code = encode_pair(x, w).unwrap();
        prop_assert_eq!(code.word().len() as u16, 2 * u16::from(x.len()) + 1 + u16::from(w.len()));
        let (x2, w2) = decode_pair(code).unwrap();
        prop_assert_eq!((x2, w2), (x, w));
    }

    #[test]
    fn setcode_roundtrip(mask in 1u64..=255, n in 1u8..=7) {
        // mask picks member ranks inside Σ^n (low 8 bits, all within range
        // since 2^n ≥ 8 for n ≥ 3; smaller n just wraps into fewer words)
        let u = uni(n);
        let slice: Vec<Word> = u.exact(n).unwrap().collect();
        let members: Vec<Word> = slice
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 8) & 1 == 1 && *i < 8)
            .map(|(_, w)| *w)
            .collect();
        prop_assume!(!members.is_empty());
        prop_assume!(u16::from(n) * members.len() as u16 <= 63);
        let code = setcode(&members).unwrap();
        prop_assert_eq!(code.len() as u16, u16::from(n) * members.len() as u16);
        let back = setcode_inv(code, n).unwrap();
        prop_assert_eq!(back, members);
    }
}
