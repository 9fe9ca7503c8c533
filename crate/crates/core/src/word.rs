//! Words in the two-letter alphabet `{x, y}`.
//!
//! A word is stored as a packed bit string (`x = 0`, `y = 1`) with the first
//! letter in the most significant occupied bit, so that for words of equal
//! length numeric order coincides with lexicographic order with `x < y`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word representable by [`Word`].
pub const MAX_WORD_LEN: usize = 64;

/// One of the two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    #[inline]
    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A (possibly empty) word in `x` and `y`.
///
/// Ordering is degree first, then lexicographic with `x < y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    /// Builds a word from its packed representation; `bits` must fit in `len` bits.
    pub fn from_bits(bits: u64, len: usize) -> Word {
        assert!(len <= MAX_WORD_LEN, "word length {len} exceeds {MAX_WORD_LEN}");
        debug_assert!(len == 64 || bits >> len == 0);
        Word { bits, len: len as u8 }
    }

    pub fn letter(l: Letter) -> Word {
        Word { bits: l.bit(), len: 1 }
    }

    pub fn x() -> Word {
        Word::letter(Letter::X)
    }

    pub fn y() -> Word {
        Word::letter(Letter::Y)
    }

    pub fn from_letters(letters: &[Letter]) -> Word {
        letters
            .iter()
            .fold(Word::EMPTY, |w, &l| w.push_back(l))
    }

    /// `x^a` repeated.
    pub fn power(l: Letter, a: usize) -> Word {
        (0..a).fold(Word::EMPTY, |w, _| w.push_back(l))
    }

    /// The word `x^{a_0} y x^{a_1} y ... y x^{a_r}`.
    pub fn from_exponents(exps: &[usize]) -> Word {
        let mut w = Word::EMPTY;
        for (i, &a) in exps.iter().enumerate() {
            if i > 0 {
                w = w.push_back(Letter::Y);
            }
            for _ in 0..a {
                w = w.push_back(Letter::X);
            }
        }
        w
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Number of `y` letters.
    #[inline]
    pub fn depth(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn at(self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 1 {
            Letter::Y
        } else {
            Letter::X
        }
    }

    pub fn letters(self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator {
        (0..self.len()).map(move |i| self.at(i))
    }

    pub fn first(self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(self) -> Option<Letter> {
        (!self.is_empty()).then(|| if self.bits & 1 == 1 { Letter::Y } else { Letter::X })
    }

    pub fn push_back(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word overflow");
        Word { bits: (self.bits << 1) | l.bit(), len: self.len + 1 }
    }

    pub fn push_front(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word overflow");
        Word { bits: self.bits | (l.bit() << self.len), len: self.len + 1 }
    }

    /// Concatenation `self · other`.
    pub fn concat(self, other: Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_WORD_LEN, "word overflow");
        let bits = if other.len() == 64 { other.bits } else { (self.bits << other.len) | other.bits };
        Word { bits, len: len as u8 }
    }

    /// Subword `[start, end)`.
    pub fn slice(self, start: usize, end: usize) -> Word {
        debug_assert!(start <= end && end <= self.len());
        let len = end - start;
        if len == 0 {
            return Word::EMPTY;
        }
        let shifted = self.bits >> (self.len() - end);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Word { bits: shifted & mask, len: len as u8 }
    }

    /// Removes the letter at position `i`.
    pub fn delete(self, i: usize) -> Word {
        self.slice(0, i).concat(self.slice(i + 1, self.len()))
    }

    /// Splits off the last letter.
    pub fn split_last(self) -> Option<(Word, Letter)> {
        let l = self.last()?;
        Some((self.slice(0, self.len() - 1), l))
    }

    /// Splits off the first letter.
    pub fn split_first(self) -> Option<(Letter, Word)> {
        let l = self.first()?;
        Some((l, self.slice(1, self.len())))
    }

    /// Exponent tuple `(a_0, ..., a_r)` of `x^{a_0} y ... y x^{a_r}`; length `depth + 1`.
    pub fn exponents(self) -> Vec<usize> {
        let mut exps = vec![0];
        for l in self.letters() {
            match l {
                Letter::X => *exps.last_mut().unwrap() += 1,
                Letter::Y => exps.push(0),
            }
        }
        exps
    }

    /// Letter reversal.
    pub fn anti(self) -> Word {
        if self.is_empty() {
            return self;
        }
        let rev = self.bits.reverse_bits() >> (64 - self.len());
        Word { bits: rev, len: self.len }
    }

    /// Cyclic shift of the exponent tuple: `x^{a_r} y x^{a_0} ... y x^{a_{r-1}}`.
    /// Identity on words without `y`.
    pub fn push(self) -> Word {
        let exps = self.exponents();
        if exps.len() == 1 {
            return self;
        }
        let mut rotated = Vec::with_capacity(exps.len());
        rotated.push(*exps.last().unwrap());
        rotated.extend_from_slice(&exps[..exps.len() - 1]);
        Word::from_exponents(&rotated)
    }

    /// Exchanges `x` and `y`.
    pub fn swap_letters(self) -> Word {
        let mask = if self.len == 64 { u64::MAX } else { (1u64 << self.len) - 1 };
        Word { bits: !self.bits & mask, len: self.len }
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate_left(self, k: usize) -> Word {
        let n = self.len();
        if n == 0 || k % n == 0 {
            return self;
        }
        let k = k % n;
        self.slice(k, n).concat(self.slice(0, k))
    }

    /// Lexicographically least cyclic rotation (canonical necklace representative).
    pub fn min_rotation(self) -> Word {
        let n = self.len();
        if n <= 1 {
            return self;
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut best = self.bits;
        let mut rot = self.bits;
        for _ in 1..n {
            rot = ((rot << 1) | (rot >> (n - 1))) & mask;
            best = best.min(rot);
        }
        Word { bits: best, len: self.len }
    }

    /// True if every letter is `y` (the empty word counts).
    pub fn is_power_of_y(self) -> bool {
        self.depth() == self.len()
    }

    /// All words of length `n` in increasing order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < 64);
        (0..(1u64 << n)).map(move |b| Word::from_bits(b, n))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
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

    /// Parses a string of `x`/`y` letters; `""` and `"1"` denote the empty word.
    fn from_str(s: &str) -> Result<Word> {
        if s.is_empty() || s == "1" {
            return Ok(Word::EMPTY);
        }
        if s.len() > MAX_WORD_LEN {
            return Err(Error::Parse(format!("word longer than {MAX_WORD_LEN} letters")));
        }
        let mut w = Word::EMPTY;
        for c in s.chars() {
            w = w.push_back(match c {
                'x' => Letter::X,
                'y' => Letter::Y,
                other => return Err(Error::Parse(format!("invalid letter {other:?} in word {s:?}"))),
            });
        }
        Ok(w)
    }
}

/// The list `Push(w)`: `w, push(w), ..., push^r(w)` for a word of depth `r`.
///
/// Repeats are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushOrbit {
    words: Vec<Word>,
}

impl PushOrbit {
    pub fn new(w: Word) -> PushOrbit {
        let r = w.depth();
        let mut words = Vec::with_capacity(r + 1);
        let mut cur = w;
        for _ in 0..=r {
            words.push(cur);
            cur = cur.push();
        }
        PushOrbit { words }
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

    /// Smallest word in the orbit; a canonical key for the class.
    pub fn representative(&self) -> Word {
        *self.words.iter().min().unwrap()
    }
}

pub fn push_orbit(w: Word) -> PushOrbit {
    PushOrbit::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("xxy").to_string(), "xxy");
        assert_eq!(w("").to_string(), "1");
        assert!("xz".parse::<Word>().is_err());
    }

    #[test]
    fn ordering_is_degree_then_lex() {
        let mut v = vec![w("yx"), w("x"), w("xy"), w("xxx"), w("y")];
        v.sort();
        let s: Vec<String> = v.iter().map(|w| w.to_string()).collect();
        assert_eq!(s, ["x", "y", "xy", "yx", "xxx"]);
    }

    #[test]
    fn exponents_round_trip() {
        let word = w("xxyxy");
        assert_eq!(word.exponents(), vec![2, 1, 0]);
        assert_eq!(Word::from_exponents(&[2, 1, 0]), word);
        assert_eq!(w("xxx").exponents(), vec![3]);
    }

    #[test]
    fn anti_reverses() {
        assert_eq!(w("xxyx").anti(), w("xyxx"));
        assert_eq!(Word::EMPTY.anti(), Word::EMPTY);
    }

    #[test]
    fn push_examples() {
        let orbit = push_orbit(w("xxyxy"));
        assert_eq!(orbit.words(), &[w("xxyxy"), w("yxxyx"), w("xyyxx")]);
        let orbit = push_orbit(w("xyxyx"));
        assert_eq!(orbit.words(), &[w("xyxyx"), w("xyxyx"), w("xyxyx")]);
        assert_eq!(push_orbit(w("xxx")).words(), &[w("xxx")]);
    }

    #[test]
    fn push_and_anti_periods() {
        for n in 0..=8 {
            for word in Word::all_of_length(n) {
                assert_eq!(word.anti().anti(), word);
                let mut cur = word;
                for _ in 0..=word.depth() {
                    cur = cur.push();
                }
                assert_eq!(cur, word, "push period on {word}");
            }
        }
    }

    #[test]
    fn slicing_and_rotation() {
        let word = w("xyyxy");
        assert_eq!(word.slice(1, 4), w("yyx"));
        assert_eq!(word.delete(0), w("yyxy"));
        assert_eq!(word.rotate_left(2), w("yxyxy"));
        assert_eq!(w("yxx").min_rotation(), w("xxy"));
        assert_eq!(w("yxyx").min_rotation(), w("xyxy"));
    }
}
