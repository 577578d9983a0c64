//! Binary words, bounded universes, pairing and set codes, prefix search.
//!
//! The global order everywhere in this crate is shortlex: shorter words
//! first, equal lengths compared bitwise with 0 < 1. `Word`'s derived `Ord`
//! implements exactly that order.

use std::fmt;
use std::str::FromStr;

use crate::Error;

/// Hard structural cap so codes always fit in the 64-bit backing store.
pub const MAX_WORD_LEN: u8 = 63;

/// Largest max-length a universe may have.
pub const MAX_UNIVERSE_LEN: u8 = 20;

/// A binary word of length 0..=63. The first character is the most
/// significant bit, so `bits < 1 << len` always holds.
///
/// Field order (len before bits) makes the derived `Ord` the shortlex order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn new(len: u8, bits: u64) -> Result<Word, Error> {
        if len > MAX_WORD_LEN {
            return Err(Error::invalid("Word::new", format!("length {len} exceeds {MAX_WORD_LEN}")));
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::invalid(
                "Word::new",
                format!("bit pattern {bits:#x} does not fit in {len} bits"),
            ));
        }
        Ok(Word { len, bits })
    }

    /// The all-zero word of length n.
    pub fn zeros(n: u8) -> Result<Word, Error> {
        Word::new(n, 0)
    }

    /// The all-one word of length n.
    pub fn ones(n: u8) -> Result<Word, Error> {
        if n > MAX_WORD_LEN {
            return Err(Error::invalid("Word::ones", format!("length {n} exceeds {MAX_WORD_LEN}")));
        }
        Ok(Word { len: n, bits: (1u64 << n) - 1 })
    }

    pub fn len(&self) -> u8 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Raw bit pattern; the first character is the most significant bit.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// i-th character from the left, 0-based.
    pub fn bit(&self, i: u8) -> bool {
        debug_assert!(i < self.len);
        (self.bits >> (self.len - 1 - i)) & 1 == 1
    }

    /// Appends one character on the right.
    pub fn push(&self, bit: bool) -> Result<Word, Error> {
        Word::new(self.len + 1, (self.bits << 1) | u64::from(bit))
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: Word) -> Result<Word, Error> {
        let len = self.len.checked_add(other.len).filter(|&l| l <= MAX_WORD_LEN).ok_or_else(
            || Error::invalid("Word::concat", "concatenation exceeds 63 bits".to_string()),
        )?;
        Ok(Word { len, bits: (self.bits << other.len) | other.bits })
    }

    /// True if self is a prefix of other (every word is a prefix of itself).
    pub fn is_prefix_of(&self, other: Word) -> bool {
        self.len <= other.len && other.bits >> (other.len - self.len) == self.bits
    }

    /// Position in the shortlex enumeration of all words: ε is 0.
    pub fn shortlex_index(&self) -> u64 {
        ((1u64 << self.len) - 1) + self.bits
    }

    /// Inverse of `shortlex_index`.
    pub fn from_shortlex_index(i: u64) -> Result<Word, Error> {
        if i == u64::MAX {
            return Err(Error::invalid("Word::from_shortlex_index", "index out of range"));
        }
        let len = (63 - (i + 1).leading_zeros()) as u8;
        Word::new(len, (i + 1) - (1u64 << len))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return write!(f, "-");
        }
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.bit(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses "0"/"1" strings; "-" denotes the empty word.
    fn from_str(s: &str) -> Result<Word, Error> {
        if s == "-" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(Error::invalid("Word::from_str", "empty text (use '-' for the empty word)"));
        }
        let mut w = Word::empty();
        for ch in s.chars() {
            match ch {
                '0' => w = w.push(false)?,
                '1' => w = w.push(true)?,
                _ => {
                    return Err(Error::invalid(
                        "Word::from_str",
                        format!("invalid character '{ch}' in word"),
                    ))
                }
            }
        }
        Ok(w)
    }
}

/// Three-way shortlex comparison; identical to `Word`'s `Ord`.
pub fn shortlex_compare(a: Word, b: Word) -> std::cmp::Ordering {
    a.cmp(&b)
}

/// All binary words of length at most `max_len`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Universe {
    max_len: u8,
}

impl Universe {
    pub fn new(max_len: u8) -> Result<Universe, Error> {
        if max_len > MAX_UNIVERSE_LEN {
            return Err(Error::invalid(
                "Universe::new",
                format!("max length {max_len} exceeds {MAX_UNIVERSE_LEN}"),
            ));
        }
        Ok(Universe { max_len })
    }

    pub fn max_len(&self) -> u8 {
        self.max_len
    }

    pub fn contains(&self, w: Word) -> bool {
        w.len() <= self.max_len
    }

    pub fn require(&self, w: Word) -> Result<(), Error> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::OutOfUniverse { word: w, max_len: self.max_len })
        }
    }

    /// Number of words in the universe: 2^(max_len+1) - 1.
    pub fn count(&self) -> u64 {
        (1u64 << (self.max_len + 1)) - 1
    }

    pub fn count_exact(&self, n: u8) -> u64 {
        1u64 << n
    }

    /// Words of exactly length n in ascending (lex) order.
    pub fn exact(&self, n: u8) -> Result<impl Iterator<Item = Word> + Clone, Error> {
        if n > self.max_len {
            return Err(Error::invalid("Universe::exact", format!("length {n} exceeds max {}", self.max_len)));
        }
        Ok((0..(1u64 << n)).map(move |bits| Word { len: n, bits }))
    }

    /// Words of length at most n in ascending shortlex order.
    pub fn upto(&self, n: u8) -> Result<impl Iterator<Item = Word> + Clone, Error> {
        if n > self.max_len {
            return Err(Error::invalid("Universe::upto", format!("length {n} exceeds max {}", self.max_len)));
        }
        Ok((0..=n).flat_map(|k| (0..(1u64 << k)).map(move |bits| Word { len: k, bits })))
    }

    /// Every word in the universe in ascending shortlex order.
    pub fn words(&self) -> impl Iterator<Item = Word> + Clone {
        self.upto(self.max_len).expect("max_len is in range")
    }

    /// Shortlex position of w, usable as a dense array index.
    pub fn index(&self, w: Word) -> Result<usize, Error> {
        self.require(w)?;
        Ok(w.shortlex_index() as usize)
    }

    pub fn word_at(&self, index: u64) -> Result<Word, Error> {
        if index >= self.count() {
            return Err(Error::invalid("Universe::word_at", format!("index {index} out of range")));
        }
        Word::from_shortlex_index(index)
    }
}

/// An encoded (word, word) pair; the code is itself a binary word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairCode(Word);

impl PairCode {
    /// Wraps an arbitrary word; `decode_pair` validates the layout.
    pub fn from_word(w: Word) -> PairCode {
        PairCode(w)
    }

    pub fn word(&self) -> Word {
        self.0
    }
}

impl fmt::Display for PairCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Encodes (x, w) as `1^|x| 0 x w`. Total length 2|x| + 1 + |w|.
pub fn encode_pair(x: Word, w: Word) -> Result<PairCode, Error> {
    let total = 2 * u16::from(x.len()) + 1 + u16::from(w.len());
    if total > u16::from(MAX_WORD_LEN) {
        return Err(Error::invalid(
            "encode_pair",
            format!("code length {total} exceeds {MAX_WORD_LEN} bits"),
        ));
    }
    let code = Word::ones(x.len())?.push(false)?.concat(x)?.concat(w)?;
    Ok(PairCode(code))
}

/// Inverse of `encode_pair`.
pub fn decode_pair(code: PairCode) -> Result<(Word, Word), Error> {
    let c = code.0;
    let mut k: u8 = 0;
    while k < c.len() && c.bit(k) {
        k += 1;
    }
    if k == c.len() {
        return Err(Error::invalid("decode_pair", "no 0 separator after the unary prefix"));
    }
    // layout: k ones, one 0, then x (k bits), then w (the rest)
    let rest = c.len() - k - 1;
    if rest < k {
        return Err(Error::invalid(
            "decode_pair",
            format!("remainder of {rest} bits is shorter than the announced |x| = {k}"),
        ));
    }
    let wl = rest - k;
    let x = Word::new(k, (c.bits() >> wl) & ((1u64 << k) - 1))?;
    let w = Word::new(wl, c.bits() & ((1u64 << wl) - 1))?;
    Ok((x, w))
}

/// Encodes a nonempty set of distinct same-length words as the concatenation
/// of its members in descending lex order. `{ε}` encodes as the empty word.
pub fn setcode(members: &[Word]) -> Result<Word, Error> {
    if members.is_empty() {
        return Err(Error::invalid("setcode", "empty set"));
    }
    let n = members[0].len();
    let mut sorted = members.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::invalid("setcode", format!("duplicate member {}", pair[0])));
        }
    }
    for m in &sorted {
        if m.len() != n {
            return Err(Error::invalid(
                "setcode",
                format!("mixed lengths: {} vs {}", sorted[0], m),
            ));
        }
    }
    let total = u16::from(n) * sorted.len() as u16;
    if total > u16::from(MAX_WORD_LEN) {
        return Err(Error::invalid("setcode", format!("code length {total} exceeds {MAX_WORD_LEN} bits")));
    }
    let mut code = Word::empty();
    for m in sorted.iter().rev() {
        code = code.concat(*m)?;
    }
    Ok(code)
}

/// Inverse of `setcode` for member length n; returns members ascending.
pub fn setcode_inv(code: Word, n: u8) -> Result<Vec<Word>, Error> {
    if n > MAX_WORD_LEN {
        return Err(Error::invalid("setcode_inv", format!("member length {n} exceeds {MAX_WORD_LEN}")));
    }
    if n == 0 {
        if code.is_empty() {
            return Ok(vec![Word::empty()]);
        }
        return Err(Error::invalid("setcode_inv", "nonempty code for member length 0"));
    }
    if code.is_empty() {
        return Err(Error::invalid("setcode_inv", "empty code encodes no set"));
    }
    if code.len() % n != 0 {
        return Err(Error::invalid(
            "setcode_inv",
            format!("code length {} is not a multiple of member length {n}", code.len()),
        ));
    }
    let count = code.len() / n;
    let mut members = Vec::with_capacity(count as usize);
    for i in 0..count {
        let shift = (count - 1 - i) * n;
        let bits = (code.bits() >> shift) & ((1u64 << n) - 1);
        members.push(Word::new(n, bits)?);
    }
    for pair in members.windows(2) {
        if pair[0] <= pair[1] {
            return Err(Error::invalid(
                "setcode_inv",
                format!("members not strictly descending: {} then {}", pair[0], pair[1]),
            ));
        }
    }
    members.reverse();
    Ok(members)
}

/// Walks a length-n prefix tree guided by a monotone predicate, preferring
/// the 1-child, and returns the lex-largest length-n word whose every prefix
/// satisfies the predicate. Returns None if the root already fails or the
/// predicate is inconsistent. Calls the predicate at most 2n + 1 times.
pub fn prefix_search(
    n: u8,
    pred: &mut dyn FnMut(Word) -> Result<bool, Error>,
) -> Result<Option<Word>, Error> {
    let mut p = Word::empty();
    if !pred(p)? {
        return Ok(None);
    }
    for _ in 0..n {
        let one = p.push(true)?;
        if pred(one)? {
            p = one;
            continue;
        }
        let zero = p.push(false)?;
        if pred(zero)? {
            p = zero;
            continue;
        }
        return Ok(None);
    }
    Ok(Some(p))
}
