//! Shared helpers for the integration suites: word literals, seeded
//! generators for target sets, and seeded selector families with known
//! structure (used as independent inputs for the exhaustive checks).

#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use selectivity::digraph::Digraph;
use selectivity::functions::{TableBuilder, ValueSet};
use selectivity::report::PropertyReport;
use selectivity::{MultiMap, TargetSet, Universe, Word};

pub fn wd(s: &str) -> Word {
    if s == "-" || s.is_empty() {
        Word::empty()
    } else {
        s.parse().expect("word literal")
    }
}

pub fn uni(n: u8) -> Universe {
    Universe::new(n).expect("universe")
}

pub fn upto_words(u: Universe, n: u8) -> Vec<Word> {
    u.upto(n).expect("upto").collect()
}

pub fn exact_words(u: Universe, n: u8) -> Vec<Word> {
    u.exact(n).expect("exact").collect()
}

pub fn set_of(u: Universe, words: &[&str]) -> TargetSet {
    TargetSet::from_words(u, words.iter().map(|s| wd(s))).expect("target set")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assert_pass(r: &PropertyReport) {
    assert!(r.pass, "expected pass: {}", r.one_line());
}

pub fn assert_fail(r: &PropertyReport) {
    assert!(!r.pass, "expected fail: {}", r.one_line());
}

/// Random subset of the whole universe: each word kept with probability 1/2.
pub fn random_set(u: Universe, rng: &mut ChaCha8Rng) -> TargetSet {
    let mut b = TargetSet::new(u);
    for w in u.words() {
        if rng.next_u32() & 1 == 1 {
            b.insert(w).expect("insert");
        }
    }
    b
}

/// Random subset of one length slice.
pub fn random_slice_set(u: Universe, n: u8, rng: &mut ChaCha8Rng) -> TargetSet {
    let mut b = TargetSet::new(u);
    for w in exact_words(u, n) {
        if rng.next_u32() & 1 == 1 {
            b.insert(w).expect("insert");
        }
    }
    b
}

/// A single-valued total commutative selector for b that is associative on
/// the whole universe: picks the argument with the larger (membership,
/// seeded-random-priority) key. Distinct seeds give distinct tie orders.
pub fn priority_selector(u: Universe, b: &TargetSet, rng: &mut ChaCha8Rng) -> MultiMap {
    let count = u.count() as usize;
    let mut priority: Vec<u32> = (0..count as u32).collect();
    for i in (1..count).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        priority.swap(i, j);
    }
    let b = b.clone();
    MultiMap::from_rule("priority", u, true, move |x, y| {
        let kx = (b.contains(x), priority[u.index(x)?]);
        let ky = (b.contains(y), priority[u.index(y)?]);
        Ok(if kx >= ky { ValueSet::first_only() } else { ValueSet::second_only() })
    })
}

/// Random total function that is associative on the whole universe but in
/// general not commutative: a random weak order decides between different
/// levels, and each level class has one fixed value shape (first argument,
/// second argument, or, when `multi`, possibly both).
pub fn random_weak_order_fn(
    u: Universe,
    level_count: u8,
    multi: bool,
    rng: &mut ChaCha8Rng,
) -> MultiMap {
    let count = u.count() as usize;
    let nlevels = level_count.max(1) as u64;
    let levels: Vec<u8> = (0..count).map(|_| (rng.next_u64() % nlevels) as u8).collect();
    let shapes: Vec<ValueSet> = (0..nlevels)
        .map(|_| match rng.next_u64() % if multi { 3 } else { 2 } {
            0 => ValueSet::first_only(),
            1 => ValueSet::second_only(),
            _ => ValueSet::both(),
        })
        .collect();
    MultiMap::from_rule("weak-order", u, !multi, move |x, y| {
        let lx = levels[u.index(x)?];
        let ly = levels[u.index(y)?];
        Ok(if lx > ly {
            ValueSet::first_only()
        } else if ly > lx {
            ValueSet::second_only()
        } else {
            shapes[lx as usize]
        })
    })
}

/// Like `random_weak_order_fn` but undefined across lengths: total and
/// associative at each length, partial as a whole.
pub fn random_per_length_fn(
    u: Universe,
    level_count: u8,
    multi: bool,
    rng: &mut ChaCha8Rng,
) -> MultiMap {
    let f = random_weak_order_fn(u, level_count, multi, rng);
    let single = !multi;
    MultiMap::from_rule("weak-order-per-length", u, single, move |x, y| {
        if x.len() != y.len() {
            return Ok(ValueSet::EMPTY);
        }
        f.eval(x, y)
    })
}

/// Random table-backed selector for b; commutativity and associativity are
/// NOT arranged. Pairs meeting b take a random nonempty value inside b (a
/// one-sided pair has only one legal value); pairs outside b take any value,
/// the empty one included unless `total`.
pub fn random_selector_table(
    u: Universe,
    b: &TargetSet,
    total: bool,
    rng: &mut ChaCha8Rng,
) -> MultiMap {
    let mut t = TableBuilder::new(u, false).expect("table");
    for x in u.words() {
        for y in u.words() {
            let mx = b.contains(x);
            let my = b.contains(y);
            let v = if x == y {
                if mx || total || rng.next_u32() & 1 == 1 {
                    ValueSet::first_only()
                } else {
                    ValueSet::EMPTY
                }
            } else if mx && my {
                match rng.next_u64() % 3 {
                    0 => ValueSet::first_only(),
                    1 => ValueSet::second_only(),
                    _ => ValueSet::both(),
                }
            } else if mx {
                ValueSet::first_only()
            } else if my {
                ValueSet::second_only()
            } else {
                match rng.next_u64() % if total { 3 } else { 4 } {
                    0 => ValueSet::first_only(),
                    1 => ValueSet::second_only(),
                    2 => ValueSet::both(),
                    _ => ValueSet::EMPTY,
                }
            };
            t.set(x, y, v).expect("cell");
        }
    }
    t.build("random-selector")
}

/// Target set from a bitmask over the given word list (bit i = word i in).
pub fn mask_set(u: Universe, words: &[Word], mask: u64) -> TargetSet {
    let picked = words
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, w)| *w);
    TargetSet::from_words(u, picked).expect("mask set")
}

/// Random s-tournament on the given vertices: one arc per unordered pair in
/// a seeded direction, plus all self-loops.
pub fn random_tournament(vertices: &[Word], rng: &mut ChaCha8Rng) -> Digraph {
    let mut verts = vertices.to_vec();
    verts.sort();
    verts.dedup();
    let n = verts.len();
    let mut towards_second = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let bit = rng.next_u32() & 1 == 1;
            towards_second[i * n + j] = bit;
            towards_second[j * n + i] = !bit;
        }
    }
    let index = verts.clone();
    Digraph::build("random-tournament", &verts, move |x, y| {
        if x == y {
            return Ok(true);
        }
        let i = index.binary_search(&x).expect("vertex");
        let j = index.binary_search(&y).expect("vertex");
        // arc (x, y) means y wins, i.e. the pair is directed at y
        Ok(towards_second[i * n + j])
    })
    .expect("tournament")
}
