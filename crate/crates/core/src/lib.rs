//! Computational toolkit for finitely presented groups in the density model:
//! free-group words, random relator sampling, b-automata, obstructions to
//! left-orderability, block alphabets and hit-count statistics.

pub mod automata;
pub mod blocks;
pub mod error;
pub mod json;
pub mod order;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod words;

pub use automata::{automata_space_size, estimate_growth, make_sign_automaton, AutomatonFile, BAutomaton, GrowthEstimate, Lambda, LetterSet};
pub use blocks::{
    associate_word, build_associated_set, build_block_alphabet, pair_relators, pairing_completes_language, AssociatedSet,
    BlockAlphabet, BlockWord, LengthClass, PairingOutcome,
};
pub use error::{Error, Result};
pub use order::{
    certify_obstruction, certify_via_languages, certify_with_route, witness_hits, Certification, ObstructionCertificate, Sign,
    SignVector, Witness, WitnessRoute,
};
pub use sampler::{compute_relator_count, sample_relator_set, Presentation, PresentationFile, SamplerConfig};
pub use stats::{
    chebyshev_tail, distinctness_probability, moments, run_concentration_experiment, run_intersection_experiment,
    ConcentrationReport, HitModelParams, IntersectionReport,
};
pub use words::{count_reduced, enumerate_reduced, sample_reduced, Alphabet, Letter, Word};

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::words::{Alphabet, Letter, Word};

    /// All `(2n)^len` words, reduced or not.
    pub fn all_words(alphabet: Alphabet, len: usize) -> Vec<Word> {
        let letters: Vec<Letter> = alphabet.letters().collect();
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w: Vec<Letter>| {
                    letters.iter().map(move |&l| {
                        let mut next = w.clone();
                        next.push(l);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(Word::new).collect()
    }
}
