//! Free-group words over `S = {a_1, ..., a_n}`.
//!
//! Letters are signed generator indices: `k > 0` is `a_k`, `k < 0` is
//! `a_|k|^-1`. The canonical letter order used by enumeration, block
//! partitioning and set iteration is `a1 < A1 < a2 < A2 < ...`, i.e. by
//! generator first and then `+1` before `-1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator count of the free group `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Alphabet {
    n: u32,
}

impl Alphabet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Alphabet { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// `|S^±| = 2n`.
    pub fn letter_count(self) -> usize {
        2 * self.n as usize
    }

    /// True for the cyclic case `n = 1`, which only small oracle cases use.
    pub fn is_cyclic(self) -> bool {
        self.n < 2
    }

    /// All letters of `S^±` in canonical order.
    pub fn letters(self) -> impl Iterator<Item = Letter> + Clone {
        (0..self.letter_count()).map(Letter::from_index)
    }

    pub fn contains(self, letter: Letter) -> bool {
        letter.generator() <= self.n
    }

    pub fn check_word(self, word: &Word) -> Result<()> {
        match word.iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::LetterOutOfRange {
                letter: l.to_signed(),
                n: self.n,
            }),
            None => Ok(()),
        }
    }
}

impl TryFrom<u32> for Alphabet {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Alphabet::new(n)
    }
}

impl From<Alphabet> for u32 {
    fn from(a: Alphabet) -> u32 {
        a.n
    }
}

/// A letter `a_i^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i32")]
pub struct Letter(i32);

impl Letter {
    pub fn from_signed(k: i32) -> Result<Self> {
        if k == 0 || k == i32::MIN {
            return Err(Error::InvalidLetter(k as i64));
        }
        Ok(Letter(k))
    }

    /// `a_generator` (1-based) or its inverse.
    pub fn new(generator: u32, positive: bool) -> Self {
        assert!(generator >= 1 && generator <= i32::MAX as u32, "generator index out of range");
        let g = generator as i32;
        Letter(if positive { g } else { -g })
    }

    /// Position in the canonical order `a1, A1, a2, A2, ...`.
    pub fn from_index(index: usize) -> Self {
        Letter::new((index / 2 + 1) as u32, index.is_multiple_of(2))
    }

    pub fn index(self) -> usize {
        2 * (self.generator() as usize - 1) + usize::from(self.0 < 0)
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn to_signed(self) -> i32 {
        self.0
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<i64> for Letter {
    type Error = Error;
    fn try_from(k: i64) -> Result<Self> {
        let k = i32::try_from(k).map_err(|_| Error::InvalidLetter(k))?;
        Letter::from_signed(k)
    }
}

impl From<Letter> for i32 {
    fn from(l: Letter) -> i32 {
        l.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.is_positive() { 'a' } else { 'A' };
        write!(f, "{}{}", c, self.generator())
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "letter",
            detail: format!("{s:?} (expected a<k> or A<k>)"),
        };
        let mut chars = s.chars();
        let positive = match chars.next() {
            Some('a') => true,
            Some('A') => false,
            _ => return Err(err()),
        };
        let generator: u32 = chars.as_str().parse().map_err(|_| err())?;
        if generator == 0 || generator > i32::MAX as u32 {
            return Err(err());
        }
        Ok(Letter::new(generator, positive))
    }
}

/// A finite, possibly empty, sequence of letters.
///
/// Serializes as a JSON array of signed integers. Ordering is lexicographic
/// in the canonical letter order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_signed(letters: &[i32]) -> Result<Self> {
        letters
            .iter()
            .map(|&k| Letter::from_signed(k))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.to_signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    /// No adjacent pair `x x^-1`.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != p[0].inverse())
    }

    /// Free reduction, done in one left-to-right pass with a stack.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &x in &self.0 {
            if out.last() == Some(&x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    /// Reversed word with every letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.len() - len..].to_vec())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Compact text form: letters separated by spaces, `a3` / `A3` for
/// `a3` / `a3^-1`. The empty word prints as an empty string.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Letter>>>()
            .map(Word)
    }
}

/// `|R_L|`: `2n(2n-1)^(L-1)` for `L >= 1`, and 1 for `L = 0`.
pub fn count_reduced(alphabet: Alphabet, length: usize) -> BigUint {
    if length == 0 {
        return BigUint::one();
    }
    let n = alphabet.n() as u64;
    let exp = u32::try_from(length - 1).expect("word length fits in u32");
    BigUint::from(2 * n) * BigUint::from(2 * n - 1).pow(exp)
}

/// Every reduced word of the given length, each exactly once, in
/// lexicographic order of the canonical letter order.
pub fn enumerate_reduced(alphabet: Alphabet, length: usize) -> ReducedWords {
    ReducedWords {
        alphabet,
        length,
        state: None,
        done: false,
    }
}

/// Iterator returned by [`enumerate_reduced`].
#[derive(Debug, Clone)]
pub struct ReducedWords {
    alphabet: Alphabet,
    length: usize,
    // letter indices of the last emitted word
    state: Option<Vec<usize>>,
    done: bool,
}

impl ReducedWords {
    // Smallest letter index >= `from` that does not cancel against `prev`.
    fn next_allowed(&self, prev: Option<usize>, from: usize) -> Option<usize> {
        (from..self.alphabet.letter_count()).find(|&j| prev.is_none_or(|p| j != p ^ 1))
    }

    fn fill_from(&self, idx: &mut Vec<usize>, pos: usize) {
        idx.truncate(pos);
        while idx.len() < self.length {
            let prev = idx.last().copied();
            let j = self
                .next_allowed(prev, 0)
                .expect("some letter always extends a reduced word");
            idx.push(j);
        }
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let next_state = match self.state.take() {
            None => {
                let mut idx = Vec::with_capacity(self.length);
                self.fill_from(&mut idx, 0);
                Some(idx)
            }
            Some(mut idx) => {
                let mut advanced = None;
                for pos in (0..idx.len()).rev() {
                    let prev = if pos == 0 { None } else { Some(idx[pos - 1]) };
                    if let Some(j) = self.next_allowed(prev, idx[pos] + 1) {
                        idx[pos] = j;
                        advanced = Some(pos);
                        break;
                    }
                }
                advanced.map(|pos| {
                    self.fill_from(&mut idx, pos + 1);
                    idx
                })
            }
        };
        match next_state {
            Some(idx) => {
                let word = Word(idx.iter().map(|&j| Letter::from_index(j)).collect());
                if self.length == 0 {
                    self.done = true;
                }
                self.state = Some(idx);
                Some(word)
            }
            None => {
                self.done = true;
                None
            }
        }
    }
}

/// Uniform draw from `R_L`: the first letter is uniform over the `2n`
/// letters, each later letter uniform over the `2n - 1` letters that do not
/// cancel its predecessor.
pub fn sample_reduced<R: Rng + ?Sized>(alphabet: Alphabet, length: usize, rng: &mut R) -> Word {
    let m = alphabet.letter_count();
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    for pos in 0..length {
        let j = if pos == 0 {
            rng.random_range(0..m)
        } else {
            let forbidden = letters[pos - 1].inverse().index();
            let j = rng.random_range(0..m - 1);
            if j >= forbidden {
                j + 1
            } else {
                j
            }
        };
        letters.push(Letter::from_index(j));
    }
    Word(letters)
}
