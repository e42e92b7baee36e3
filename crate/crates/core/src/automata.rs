//! b-automata: transition data `{σ_∅} ∪ {σ_s : s ∈ S^±}` over an alphabet.
//!
//! The language of an automaton is every non-empty word whose first letter
//! lies in `σ_∅` and in which each letter `s'` following `s` lies in `σ_s`.
//! Counting is a transfer-matrix DP whose state is the last letter read.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::order::SignVector;
use crate::words::{Alphabet, Letter, Word};

/// Rational largeness parameter `λ`.
pub type Lambda = Ratio<u64>;

/// A subset of `S^±`, stored as a bitset over canonical letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LetterSet {
    bits: Vec<u64>,
}

impl LetterSet {
    pub fn new() -> Self {
        LetterSet::default()
    }

    pub fn full(alphabet: Alphabet) -> Self {
        alphabet.letters().collect()
    }

    pub fn insert(&mut self, letter: Letter) {
        let i = letter.index();
        if self.bits.len() <= i / 64 {
            self.bits.resize(i / 64 + 1, 0);
        }
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, letter: Letter) {
        let i = letter.index();
        if let Some(w) = self.bits.get_mut(i / 64) {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, letter: Letter) -> bool {
        let i = letter.index();
        self.bits.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Members in canonical letter order.
    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.bits.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| Letter::from_index(64 * k + b))
        })
    }

    pub fn difference(&self, other: &LetterSet) -> LetterSet {
        let bits = self
            .bits
            .iter()
            .enumerate()
            .map(|(k, &w)| w & !other.bits.get(k).copied().unwrap_or(0))
            .collect();
        LetterSet { bits }
    }

    pub fn is_subset(&self, other: &LetterSet) -> bool {
        self.difference(other).is_empty()
    }

    fn max_generator(&self) -> u32 {
        self.iter().map(|l| l.generator()).max().unwrap_or(0)
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::new();
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A b-automaton over an alphabet of `n` generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BAutomaton {
    alphabet: Alphabet,
    sigma_empty: LetterSet,
    // indexed by canonical letter index, 2n entries
    sigma: Vec<LetterSet>,
}

impl BAutomaton {
    /// Automaton with every transition set empty (its language is empty).
    pub fn empty(alphabet: Alphabet) -> Self {
        BAutomaton {
            alphabet,
            sigma_empty: LetterSet::new(),
            sigma: vec![LetterSet::new(); alphabet.letter_count()],
        }
    }

    /// Every transition set equal to `S^±`; the language is all non-empty words.
    pub fn full(alphabet: Alphabet) -> Self {
        let all = LetterSet::full(alphabet);
        BAutomaton {
            alphabet,
            sigma_empty: all.clone(),
            sigma: vec![all; alphabet.letter_count()],
        }
    }

    pub fn new(alphabet: Alphabet, sigma_empty: LetterSet, sigma: Vec<LetterSet>) -> Result<Self> {
        if sigma.len() != alphabet.letter_count() {
            return Err(Error::InvalidParameter(format!(
                "transition data needs {} sets, got {}",
                alphabet.letter_count(),
                sigma.len()
            )));
        }
        for set in std::iter::once(&sigma_empty).chain(&sigma) {
            let g = set.max_generator();
            if g > alphabet.n() {
                return Err(Error::LetterOutOfRange {
                    letter: g as i32,
                    n: alphabet.n(),
                });
            }
        }
        Ok(BAutomaton {
            alphabet,
            sigma_empty,
            sigma,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn initial(&self) -> &LetterSet {
        &self.sigma_empty
    }

    pub fn follow(&self, s: Letter) -> &LetterSet {
        &self.sigma[s.index()]
    }

    pub fn set_initial(&mut self, set: LetterSet) -> Result<()> {
        self.check_set(&set)?;
        self.sigma_empty = set;
        Ok(())
    }

    pub fn set_follow(&mut self, s: Letter, set: LetterSet) -> Result<()> {
        self.check_set(&set)?;
        if !self.alphabet.contains(s) {
            return Err(Error::LetterOutOfRange {
                letter: s.to_signed(),
                n: self.alphabet.n(),
            });
        }
        self.sigma[s.index()] = set;
        Ok(())
    }

    fn check_set(&self, set: &LetterSet) -> Result<()> {
        let g = set.max_generator();
        if g > self.alphabet.n() {
            return Err(Error::LetterOutOfRange {
                letter: g as i32,
                n: self.alphabet.n(),
            });
        }
        Ok(())
    }

    /// Language membership. The empty word is never accepted.
    pub fn accepts(&self, w: &Word) -> bool {
        let Some(first) = w.first() else {
            return false;
        };
        self.sigma_empty.contains(first)
            && w.letters()
                .windows(2)
                .all(|p| self.alphabet.contains(p[0]) && self.sigma[p[0].index()].contains(p[1]))
    }

    /// `σ_∅ ≠ ∅` and `|σ_s| >= λ·2n` for every letter, compared exactly.
    pub fn is_lambda_large(&self, lambda: Lambda) -> bool {
        let need = *lambda.numer() as u128 * self.alphabet.letter_count() as u128;
        let den = *lambda.denom() as u128;
        !self.sigma_empty.is_empty() && self.sigma.iter().all(|s| s.len() as u128 * den >= need)
    }

    /// Largest `m` with `|σ_s| >= m` for all `s`, i.e. `min_s |σ_s|`.
    pub fn min_follow_size(&self) -> usize {
        self.sigma.iter().map(LetterSet::len).min().unwrap_or(0)
    }

    /// Exact number of length-`L` words in the language.
    pub fn count_language_words(&self, length: usize) -> BigUint {
        self.count_upto(length, false).pop().unwrap_or_default()
    }

    /// Exact number of reduced length-`L` words in the language.
    pub fn count_language_reduced(&self, length: usize) -> BigUint {
        self.count_upto(length, true).pop().unwrap_or_default()
    }

    /// Counts for lengths `0..=max_len` (index 0 is always zero).
    pub fn count_upto(&self, max_len: usize, reduced: bool) -> Vec<BigUint> {
        let m = self.alphabet.letter_count();
        let mut totals = vec![BigUint::zero()];
        if max_len == 0 {
            return totals;
        }
        let mut state: Vec<BigUint> = (0..m)
            .map(|j| BigUint::from(u8::from(self.sigma_empty.contains(Letter::from_index(j)))))
            .collect();
        totals.push(state.iter().sum());
        for _ in 2..=max_len {
            let mut next = vec![BigUint::zero(); m];
            for (j, count) in state.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for t in self.sigma[j].iter() {
                    let t = t.index();
                    if reduced && t == j ^ 1 {
                        continue;
                    }
                    next[t] += count;
                }
            }
            state = next;
            totals.push(state.iter().sum());
        }
        totals
    }

    /// All length-`L` words of the language, in canonical order.
    pub fn enumerate_language(&self, length: usize) -> Vec<Word> {
        fn extend(a: &BAutomaton, prefix: &mut Vec<Letter>, length: usize, out: &mut Vec<Word>) {
            if prefix.len() == length {
                out.push(Word::new(prefix.clone()));
                return;
            }
            let next = match prefix.last() {
                None => a.initial(),
                Some(&s) => a.follow(s),
            };
            for t in next.iter() {
                prefix.push(t);
                extend(a, prefix, length, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if length > 0 {
            extend(self, &mut Vec::with_capacity(length), length, &mut out);
        }
        out
    }

    pub fn to_file(&self) -> AutomatonFile {
        AutomatonFile {
            n: self.alphabet.n(),
            sigma_empty: self.sigma_empty.iter().map(Letter::to_signed).collect(),
            sigma: self
                .alphabet
                .letters()
                .map(|s| (s.to_signed(), self.follow(s).iter().map(Letter::to_signed).collect()))
                .collect(),
        }
    }

    pub fn from_file(file: &AutomatonFile) -> Result<Self> {
        let alphabet = Alphabet::new(file.n)?;
        if file.sigma.len() != alphabet.letter_count() {
            return Err(Error::InvalidParameter(format!(
                "sigma must have exactly {} entries, got {}",
                alphabet.letter_count(),
                file.sigma.len()
            )));
        }
        let to_set = |v: &[i32]| -> Result<LetterSet> {
            v.iter()
                .map(|&k| {
                    let l = Letter::from_signed(k)?;
                    if alphabet.contains(l) {
                        Ok(l)
                    } else {
                        Err(Error::LetterOutOfRange { letter: k, n: alphabet.n() })
                    }
                })
                .collect()
        };
        let mut a = BAutomaton::empty(alphabet);
        a.sigma_empty = to_set(&file.sigma_empty)?;
        let mut seen = LetterSet::new();
        for &(k, ref targets) in &file.sigma {
            let s = Letter::from_signed(k)?;
            if !alphabet.contains(s) {
                return Err(Error::LetterOutOfRange { letter: k, n: alphabet.n() });
            }
            if seen.contains(s) {
                return Err(Error::InvalidParameter(format!("duplicate sigma entry for {k}")));
            }
            seen.insert(s);
            a.sigma[s.index()] = to_set(targets)?;
        }
        Ok(a)
    }

    pub fn to_json(&self, indent: Option<usize>) -> String {
        crate::json::to_string(&self.to_file(), indent)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AutomatonFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "automaton JSON",
            detail: e.to_string(),
        })?;
        BAutomaton::from_file(&file)
    }
}

/// On-disk automaton:
/// `{ "n": int, "sigma_empty": [int], "sigma": { "<letter>": [int], ... } }`.
/// Map keys are signed letters written as strings; they are emitted in
/// canonical letter order.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomatonFile {
    pub n: u32,
    pub sigma_empty: Vec<i32>,
    pub sigma: Vec<(i32, Vec<i32>)>,
}

impl Serialize for AutomatonFile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Sigma<'a>(&'a [(i32, Vec<i32>)]);
        impl Serialize for Sigma<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    map.serialize_entry(&k.to_string(), v)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("sigma_empty", &self.sigma_empty)?;
        map.serialize_entry("sigma", &Sigma(&self.sigma))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for AutomatonFile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            sigma_empty: Vec<i32>,
            sigma: BTreeMap<String, Vec<i32>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut sigma = raw
            .sigma
            .into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<i32>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("sigma key {k:?} is not a signed letter")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        sigma.sort_by_key(|(k, _)| (k.unsigned_abs(), *k < 0));
        Ok(AutomatonFile {
            n: raw.n,
            sigma_empty: raw.sigma_empty,
            sigma,
        })
    }
}

/// The sign automaton `A_{ε,i}`: `σ_∅ = {a_i^{ε_i}}` and every
/// `σ_s = {a_1^{ε_1}, ..., a_n^{ε_n}}`. Its language is the non-empty words
/// in the letters `a_j^{ε_j}` that start with `a_i^{ε_i}`; all are reduced.
pub fn make_sign_automaton(signs: &SignVector, i: usize) -> Result<BAutomaton> {
    let n = signs.len();
    if i == 0 || i > n {
        return Err(Error::InvalidParameter(format!("index i = {i} outside 1..={n}")));
    }
    let alphabet = Alphabet::new(n as u32)?;
    let positive: LetterSet = signs.letters().collect();
    let mut a = BAutomaton::empty(alphabet);
    a.sigma_empty = std::iter::once(signs.letter(i)).collect();
    for set in &mut a.sigma {
        *set = positive.clone();
    }
    Ok(a)
}

/// Number of b-automata over `n` generators: `2^(2n(2n+1))`.
pub fn automata_space_size(n: u32) -> BigUint {
    let n = n as usize;
    BigUint::from(1u32) << (2 * n * (2 * n + 1))
}

/// Finite-range growth estimate of a language.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEstimate {
    /// Ratio of the exact counts at the two largest lengths.
    pub growth_rate_lower: f64,
    /// `log k / log(2n-1)`; `None` when `n = 1` or `k = 0`.
    pub density_lower: Option<f64>,
    /// `(L, count)` for every length in the requested range.
    pub count_basis: Vec<(usize, BigUint)>,
    /// Largest `c` with `count(L) >= c·k^L` on the recorded range.
    pub constant: f64,
    /// The two lengths whose ratio gave `k`.
    pub ratio_lengths: (usize, usize),
    pub reduced: bool,
    /// All counts are zero; the language has no words in range.
    pub degenerate: bool,
}

/// Growth rate `k` from the exact counts at `max_len - 1` and `max_len`, with
/// `d' = log_{2n-1} k` and the constant `c` fitted over `min_len..=max_len`.
pub fn estimate_growth(a: &BAutomaton, min_len: usize, max_len: usize, reduced: bool) -> Result<GrowthEstimate> {
    if min_len == 0 || min_len >= max_len {
        return Err(Error::InvalidParameter(format!(
            "growth range needs 1 <= L_min < L_max, got {min_len}..{max_len}"
        )));
    }
    let counts = a.count_upto(max_len, reduced);
    let count_basis: Vec<(usize, BigUint)> = (min_len..=max_len).map(|l| (l, counts[l].clone())).collect();
    let degenerate = count_basis.iter().all(|(_, c)| c.is_zero());
    let prev = &counts[max_len - 1];
    let last = &counts[max_len];
    let k = if prev.is_zero() {
        0.0
    } else {
        BigRational::new(last.clone().into(), prev.clone().into())
            .to_f64()
            .unwrap_or(f64::INFINITY)
    };
    let base = (2 * a.alphabet().n() - 1) as f64;
    let density_lower = (k > 0.0 && base > 1.0).then(|| k.ln() / base.ln());
    let constant = if k > 0.0 {
        count_basis
            .iter()
            .map(|(l, c)| (ln_big(c) - *l as f64 * k.ln()).exp())
            .fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    Ok(GrowthEstimate {
        growth_rate_lower: k,
        density_lower,
        count_basis,
        constant,
        ratio_lengths: (max_len - 1, max_len),
        reduced,
        degenerate,
    })
}

/// Natural log of a big integer; `-inf` for zero.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}
