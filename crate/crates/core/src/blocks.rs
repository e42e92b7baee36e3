//! Block alphabets and associated relators.
//!
//! The reduced words of length `B` over `S` form `S̃`; inversion is a
//! fixed-point-free involution on it, so `S̃ = Ŝ ⊎ Ŝ^-1`. A relator whose
//! length is divisible by `B` reads, block by block, as a word over `Ŝ`.
//!
//! Block letters are ordinary [`Letter`]s over an alphabet of `n̂` generators:
//! `+k` is the `k`-th word of `Ŝ` in canonical order and `-k` its inverse.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{BAutomaton, Lambda, LetterSet};
use crate::error::{Error, Result};
use crate::sampler::Presentation;
use crate::words::{enumerate_reduced, Alphabet, Letter, Word};

/// Default cap on `|S̃| = 2n(2n-1)^(B-1)`.
pub const DEFAULT_BLOCK_BUDGET: u64 = 1_000_000;

/// Identifier of the partition rule recorded in output files.
pub const PARTITION_RULE: &str = "lex-precedes-inverse";

#[derive(Debug, Clone)]
pub struct BlockAlphabet {
    base: Alphabet,
    block_len: usize,
    hat: Alphabet,
    // by block letter index (2n̂ entries)
    expansions: Vec<Word>,
    lookup: HashMap<Word, Letter>,
    // block letters whose expansion starts with a given base letter
    by_first: Vec<LetterSet>,
}

impl BlockAlphabet {
    pub fn base(&self) -> Alphabet {
        self.base
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// `Ŝ` viewed as an alphabet of `n̂` generators.
    pub fn hat_alphabet(&self) -> Alphabet {
        self.hat
    }

    /// `n̂ = n(2n-1)^(B-1)`.
    pub fn n_hat(&self) -> u32 {
        self.hat.n()
    }

    /// `Ŝ` in canonical order.
    pub fn positives(&self) -> impl Iterator<Item = &Word> {
        self.expansions.iter().step_by(2)
    }

    /// The length-`B` word a block letter stands for.
    pub fn expand_letter(&self, letter: Letter) -> &Word {
        &self.expansions[letter.index()]
    }

    /// The block letter for a reduced length-`B` word.
    pub fn letter_for(&self, block: &Word) -> Option<Letter> {
        self.lookup.get(block).copied()
    }

    /// Concatenated expansion. Not reduced in general.
    pub fn expand(&self, w: &BlockWord) -> Word {
        Word::new(
            w.0.iter()
                .flat_map(|&l| self.expand_letter(l).letters().iter().copied())
                .collect(),
        )
    }

    // Blockwise reading of a word whose length is a multiple of B. Each block
    // must be reduced.
    fn read_blocks(&self, w: &Word) -> Result<BlockWord> {
        if !w.len().is_multiple_of(self.block_len) {
            return Err(Error::LengthNotDivisible {
                length: w.len(),
                block: self.block_len,
            });
        }
        w.letters()
            .chunks(self.block_len)
            .map(|chunk| {
                let block = Word::new(chunk.to_vec());
                self.letter_for(&block)
                    .ok_or_else(|| Error::NotReduced(block.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| BlockWord(Word::new(v)))
    }
}

/// Builds `Ŝ` under the default budget.
pub fn build_block_alphabet(n: u32, block_len: usize) -> Result<BlockAlphabet> {
    build_block_alphabet_with_budget(n, block_len, DEFAULT_BLOCK_BUDGET)
}

/// A word of `S̃` joins `Ŝ` iff it precedes its inverse in canonical order.
pub fn build_block_alphabet_with_budget(n: u32, block_len: usize, budget: u64) -> Result<BlockAlphabet> {
    let base = Alphabet::new(n)?;
    if block_len == 0 {
        return Err(Error::InvalidParameter("block length B must be >= 1".into()));
    }
    let size = (2 * n as u128).saturating_mul((2 * n as u128 - 1).checked_pow(block_len as u32 - 1).unwrap_or(u128::MAX));
    if size > budget as u128 {
        return Err(Error::Budget {
            what: "block alphabet size 2n(2n-1)^(B-1)",
            required: size.to_string(),
            limit: budget,
        });
    }
    let positives: Vec<Word> = enumerate_reduced(base, block_len)
        .filter(|w| *w < w.inverse())
        .collect();
    let hat = Alphabet::new(positives.len() as u32)?;
    let mut expansions = Vec::with_capacity(2 * positives.len());
    for w in positives {
        let inv = w.inverse();
        expansions.push(w);
        expansions.push(inv);
    }
    let lookup: HashMap<Word, Letter> = expansions
        .iter()
        .enumerate()
        .map(|(j, w)| (w.clone(), Letter::from_index(j)))
        .collect();
    let mut by_first = vec![LetterSet::new(); base.letter_count()];
    for (j, w) in expansions.iter().enumerate() {
        by_first[w.first().expect("blocks are non-empty").index()].insert(Letter::from_index(j));
    }
    Ok(BlockAlphabet {
        base,
        block_len,
        hat,
        expansions,
        lookup,
        by_first,
    })
}

/// A word over `Ŝ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockWord(Word);

impl BlockWord {
    pub fn new(word: Word) -> Self {
        BlockWord(word)
    }

    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `I_P = { B·L̂ + P : L̂ > 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthClass {
    pub block_len: usize,
    pub residue: usize,
}

impl LengthClass {
    pub fn new(block_len: usize, residue: usize) -> Result<Self> {
        if block_len == 0 || residue >= block_len {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= P < B, got B = {block_len}, P = {residue}"
            )));
        }
        Ok(LengthClass { block_len, residue })
    }

    /// The class containing `length`, if `length >= B`.
    pub fn of_length(block_len: usize, length: usize) -> Result<Self> {
        let class = LengthClass::new(block_len, length % block_len.max(1))?;
        class.check(length)?;
        Ok(class)
    }

    pub fn contains(&self, length: usize) -> bool {
        self.hat_length(length).is_some()
    }

    /// `L̂` with `L = B·L̂ + P`.
    pub fn hat_length(&self, length: usize) -> Option<usize> {
        let rest = length.checked_sub(self.residue)?;
        (rest % self.block_len == 0 && rest >= self.block_len).then_some(rest / self.block_len)
    }

    fn check(&self, length: usize) -> Result<usize> {
        self.hat_length(length).ok_or(Error::ResidueMismatch {
            length,
            block: self.block_len,
            residue: self.residue,
        })
    }
}

/// The associated word: `r` cut into blocks of length `B`.
pub fn associate_word(r: &Word, ba: &BlockAlphabet) -> Result<BlockWord> {
    if r.is_empty() {
        return Err(Error::InvalidParameter("cannot associate the empty word".into()));
    }
    if !r.len().is_multiple_of(ba.block_len) {
        return Err(Error::LengthNotDivisible {
            length: r.len(),
            block: ba.block_len,
        });
    }
    if !r.is_reduced() {
        return Err(Error::NotReduced(r.to_string()));
    }
    ba.read_blocks(r)
}

fn check_reduced(w: &Word) -> Result<()> {
    if w.is_reduced() {
        Ok(())
    } else {
        Err(Error::NotReduced(w.to_string()))
    }
}

/// `r̂(r1, r2)`: when `r1 = q1 v^-1` and `r2 = v q2` with `|v| = P`, the
/// associated word of `q1 q2` (length `2L̂`, possibly non-reduced).
pub fn pair_relators(r1: &Word, r2: &Word, ba: &BlockAlphabet, residue: usize) -> Result<Option<BlockWord>> {
    if residue == 0 {
        return Err(Error::InvalidParameter("pairing needs 1 <= P < B".into()));
    }
    let class = LengthClass::new(ba.block_len, residue)?;
    if r1.len() != r2.len() {
        return Err(Error::MixedLengths);
    }
    let length = r1.len();
    class.check(length)?;
    check_reduced(r1)?;
    check_reduced(r2)?;
    if r1.suffix(residue) != r2.prefix(residue).inverse() {
        return Ok(None);
    }
    let q1 = r1.prefix(length - residue);
    let q2 = r2.suffix(length - residue);
    ba.read_blocks(&q1.concat(&q2)).map(Some)
}

/// `R̂` for a presentation together with the data needed to write it out.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedSet {
    pub n: u32,
    pub block_len: usize,
    pub residue: usize,
    pub relator_length: Option<usize>,
    pub words: BTreeSet<BlockWord>,
    pub n_hat: u32,
    pub d: Option<f64>,
    pub seed: Option<u64>,
}

impl AssociatedSet {
    pub fn to_file(&self) -> AssociatedSetFile {
        let hat_len = self.relator_length.map(|l| {
            let lh = (l - self.residue) / self.block_len;
            if self.residue == 0 {
                lh
            } else {
                2 * lh
            }
        });
        AssociatedSetFile {
            n: self.n_hat,
            length: hat_len,
            d: self.d,
            seed: self.seed,
            relators: self.words.iter().cloned().collect(),
            block_alphabet: BlockAlphabetInfo {
                n: self.n,
                block_len: self.block_len,
                residue: self.residue,
                partition_rule: PARTITION_RULE.to_string(),
            },
        }
    }

    pub fn to_json(&self, indent: Option<usize>) -> String {
        crate::json::to_string(&self.to_file(), indent)
    }
}

/// On-disk associated set: a presentation over `Ŝ` plus the block alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociatedSetFile {
    pub n: u32,
    #[serde(rename = "L")]
    pub length: Option<usize>,
    pub d: Option<f64>,
    pub seed: Option<u64>,
    pub relators: Vec<BlockWord>,
    pub block_alphabet: BlockAlphabetInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockAlphabetInfo {
    pub n: u32,
    #[serde(rename = "B")]
    pub block_len: usize,
    #[serde(rename = "P")]
    pub residue: usize,
    pub partition_rule: String,
}

/// `R̂`: for `P = 0` the associated words of the relators; for `P > 0` every
/// `r̂(r1, r2)` over ordered pairs of tuple entries, self-pairs included.
pub fn build_associated_set(p: &Presentation, ba: &BlockAlphabet) -> Result<AssociatedSet> {
    if p.alphabet() != ba.base {
        return Err(Error::InvalidParameter(format!(
            "presentation has n = {}, block alphabet has n = {}",
            p.alphabet().n(),
            ba.base.n()
        )));
    }
    let relators = p.relators();
    let length = match relators.first() {
        None => p.provenance().map(|c| c.length),
        Some(_) => Some(p.relator_length().ok_or(Error::MixedLengths)?),
    };
    let residue = match length {
        Some(l) => LengthClass::of_length(ba.block_len, l)?.residue,
        None => 0,
    };
    for r in relators {
        check_reduced(r)?;
    }
    let words: BTreeSet<BlockWord> = if residue == 0 {
        relators
            .iter()
            .map(|r| associate_word(r, ba))
            .collect::<Result<_>>()?
    } else {
        let per_r1: Vec<Vec<BlockWord>> = relators
            .par_iter()
            .map(|r1| {
                relators
                    .iter()
                    .filter_map(|r2| pair_relators(r1, r2, ba, residue).transpose())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        per_r1.into_iter().flatten().collect()
    };
    Ok(AssociatedSet {
        n: ba.base.n(),
        block_len: ba.block_len,
        residue,
        relator_length: length,
        words,
        n_hat: ba.n_hat(),
        d: p.provenance().map(|c| c.d),
        seed: p.provenance().map(|c| c.seed),
    })
}

/// `ρ_ŝ`: block letters whose expansion starts with the inverse of the last
/// letter of `ŝ`. Has `2n̂/2n` members.
pub fn rho_following(ba: &BlockAlphabet, block: Letter) -> Result<LetterSet> {
    check_block_letter(ba, block)?;
    let last = ba.expand_letter(block).last().expect("blocks are non-empty");
    Ok(ba.by_first[last.inverse().index()].clone())
}

/// `ρ^s`: block letters whose expansion starts with `s^-1`. Has `2n̂/2n` members.
pub fn rho_starting(ba: &BlockAlphabet, s: Letter) -> Result<LetterSet> {
    if !ba.base.contains(s) {
        return Err(Error::LetterOutOfRange {
            letter: s.to_signed(),
            n: ba.base.n(),
        });
    }
    Ok(ba.by_first[s.inverse().index()].clone())
}

fn check_block_letter(ba: &BlockAlphabet, block: Letter) -> Result<()> {
    if ba.hat.contains(block) {
        Ok(())
    } else {
        Err(Error::LetterOutOfRange {
            letter: block.to_signed(),
            n: ba.n_hat(),
        })
    }
}

fn check_over_hat(a: &BAutomaton, ba: &BlockAlphabet) -> Result<()> {
    if a.alphabet() == ba.hat {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "automaton is over {} generators, block alphabet has n_hat = {}",
            a.alphabet().n(),
            ba.n_hat()
        )))
    }
}

/// `λ' = λ - 1/(2n)` when positive.
pub fn reduced_lambda(lambda: Lambda, n: u32) -> Option<Lambda> {
    let shift = Ratio::new(1, 2 * n as u64);
    (lambda > shift).then(|| lambda - shift)
}

/// `A^red`: `σ^red_∅ = σ_∅` and `σ^red_ŝ = σ_ŝ \ ρ_ŝ`. Words it accepts expand
/// to reduced words over `S`.
pub fn derive_reduced_automaton(a: &BAutomaton, ba: &BlockAlphabet) -> Result<BAutomaton> {
    check_over_hat(a, ba)?;
    let mut red = a.clone();
    for block in ba.hat.letters() {
        let rho = rho_following(ba, block)?;
        red.set_follow(block, a.follow(block).difference(&rho))?;
    }
    Ok(red)
}

/// `A^{ŝ,s}` together with a flag for an empty initial set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuation {
    pub automaton: BAutomaton,
    pub initial_empty: bool,
}

/// `A^{ŝ,s}`: the transition data of `A` with `σ_∅` replaced by `σ_ŝ \ ρ^s`.
pub fn derive_continuation_automaton(a: &BAutomaton, ba: &BlockAlphabet, block: Letter, s: Letter) -> Result<Continuation> {
    check_over_hat(a, ba)?;
    check_block_letter(ba, block)?;
    let initial = a.follow(block).difference(&rho_starting(ba, s)?);
    let initial_empty = initial.is_empty();
    let mut automaton = a.clone();
    automaton.set_initial(initial)?;
    Ok(Continuation {
        automaton,
        initial_empty,
    })
}

/// `w ∈ 𝓛_A`: reduced, length a positive multiple of `B`, associated word
/// accepted by `A`.
pub fn in_block_language(w: &Word, a: &BAutomaton, ba: &BlockAlphabet) -> Result<bool> {
    check_over_hat(a, ba)?;
    if w.is_empty() || !w.len().is_multiple_of(ba.block_len) || !w.is_reduced() {
        return Ok(false);
    }
    Ok(a.accepts(ba.read_blocks(w)?.as_word()))
}

/// `w ∈ 𝒫_A^P`: `w` reduced with `|w| ∈ I_P`, and its length-`(|w| - P)`
/// prefix lies in `𝓛_A`.
pub fn in_prefix_set(w: &Word, a: &BAutomaton, ba: &BlockAlphabet, residue: usize) -> Result<bool> {
    let class = LengthClass::new(ba.block_len, residue)?;
    class.check(w.len())?;
    if !w.is_reduced() {
        return Ok(false);
    }
    in_block_language(&w.prefix(w.len() - residue), a, ba)
}

/// `w ∈ 𝒮_A^{ŝ,v}`: the length-`P` prefix of `w` is `v` and the rest lies in
/// `𝓛_{A^{ŝ,s}}`, where `P = |v|` and `s` is the last letter of `v`.
pub fn in_suffix_set(w: &Word, a: &BAutomaton, ba: &BlockAlphabet, block: Letter, v: &Word) -> Result<bool> {
    let residue = v.len();
    if residue == 0 {
        return Err(Error::InvalidParameter("v must be non-empty".into()));
    }
    check_reduced(v)?;
    let class = LengthClass::new(ba.block_len, residue)?;
    class.check(w.len())?;
    if w.prefix(residue) != *v {
        return Ok(false);
    }
    let s = v.last().expect("v is non-empty");
    let cont = derive_continuation_automaton(a, ba, block, s)?;
    in_block_language(&w.suffix(w.len() - residue), &cont.automaton, ba)
}

/// Result of checking the pairing step for one `(r1, r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingOutcome {
    /// `r1 ∉ 𝒫_A^P` or `r2 ∉ 𝒮_A^{ŝ,v}`; nothing to check.
    Vacuous,
    /// `r̂(r1, r2)` exists and lies in the language of `A`.
    Completes,
    /// Preconditions hold but `r̂(r1, r2)` is missing or rejected.
    Fails,
}

impl PairingOutcome {
    pub fn holds(self) -> bool {
        self != PairingOutcome::Fails
    }
}

/// For `r1 ∈ 𝒫_A^P` with last `P` letters `v^-1` preceded by the block `ŝ`,
/// and `r2 ∈ 𝒮_A^{ŝ,v}`, the glued word `r̂(r1, r2)` must be accepted by `A`.
///
/// With `P = 0` there is no gluing: the outcome is `Completes` whenever the
/// associated word of `r1` is accepted, and `r2` is ignored.
pub fn pairing_completes_language(
    a: &BAutomaton,
    r1: &Word,
    r2: &Word,
    ba: &BlockAlphabet,
    residue: usize,
) -> Result<PairingOutcome> {
    if !in_prefix_set(r1, a, ba, residue)? {
        return Ok(PairingOutcome::Vacuous);
    }
    if residue == 0 {
        return Ok(PairingOutcome::Completes);
    }
    let length = r1.len();
    let v = r1.suffix(residue).inverse();
    let last_block = r1.slice(length - residue - ba.block_len..length - residue);
    let block = ba
        .letter_for(&last_block)
        .ok_or_else(|| Error::NotReduced(last_block.to_string()))?;
    if r2.len() != length || !in_suffix_set(r2, a, ba, block, &v)? {
        return Ok(PairingOutcome::Vacuous);
    }
    Ok(match pair_relators(r1, r2, ba, residue)? {
        Some(glued) if a.accepts(glued.as_word()) => PairingOutcome::Completes,
        _ => PairingOutcome::Fails,
    })
}
