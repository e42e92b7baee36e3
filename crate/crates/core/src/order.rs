//! Left-orderability obstruction certificates.
//!
//! If for every sign vector `ε ∈ {±1}^n` and every `i` the relator tuple
//! holds a non-empty word written only in the letters `a_j^{ε_j}` that uses
//! `a_i^{ε_i}`, the presented group is trivial or not left-orderable. This
//! module searches for such witnesses. It never decides which of the two
//! alternatives holds.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::make_sign_automaton;
use crate::error::{Error, Result};
use crate::sampler::Presentation;
use crate::words::{Letter, Word};

/// Default limit on `n` for certificate search (`2^n · n` pairs).
pub const DEFAULT_MAX_GENERATORS: u32 = 20;

/// Verdict strings used in reports and certificate files.
pub const VERDICT_CERTIFIED: &str = "CERTIFIED: trivial-or-non-LO";
pub const VERDICT_NONE: &str = "NO-CERTIFICATE";

/// `+1` orders before `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `(ε_1, ..., ε_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn from_i32(signs: &[i32]) -> Result<Self> {
        signs
            .iter()
            .map(|&s| match s {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }

    /// The sign vector with bit `n-1-j` of `mask` selecting `ε_{j+1} = -1`,
    /// so increasing masks enumerate vectors lexicographically.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SignVector(
            (0..n)
                .map(|j| if mask >> (n - 1 - j) & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    /// All `2^n` sign vectors in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << n).map(move |mask| SignVector::from_mask(n, mask))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn to_i32(&self) -> Vec<i32> {
        self.0.iter().map(|s| s.to_i32()).collect()
    }

    /// `a_i^{ε_i}` for 1-based `i`.
    pub fn letter(&self, i: usize) -> Letter {
        Letter::new(i as u32, self.0[i - 1] == Sign::Plus)
    }

    /// `{a_1^{ε_1}, ..., a_n^{ε_n}}`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (1..=self.len()).map(|i| self.letter(i))
    }

    pub fn flipped(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.flip()).collect())
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *s == Sign::Plus { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

/// Every letter of `w` is some `a_j^{ε_j}`. Vacuously true for the empty word.
pub fn uses_only_positive_letters(w: &Word, signs: &SignVector) -> bool {
    w.iter().all(|l| {
        let g = l.generator() as usize;
        g >= 1 && g <= signs.len() && signs.letter(g) == *l
    })
}

/// A relator chosen as witness for one `(ε, i)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub relator_index: usize,
    pub word: Word,
}

/// First relator in tuple order that is non-empty, uses only the letters
/// `a_j^{ε_j}` and contains `a_i^{ε_i}`.
pub fn find_positive_relator(p: &Presentation, signs: &SignVector, i: usize) -> Option<Witness> {
    let target = signs.letter(i);
    p.relators()
        .iter()
        .position(|r| !r.is_empty() && r.iter().any(|&l| l == target) && uses_only_positive_letters(r, signs))
        .map(|k| Witness {
            relator_index: k,
            word: p.relators()[k].clone(),
        })
}

/// One `(ε, i) → witness` entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateEntry {
    pub signs: SignVector,
    pub index: usize,
    pub witness: Witness,
}

/// A witness for every `(ε, i)`, ordered by `ε` then `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    n: u32,
    entries: Vec<CertificateEntry>,
}

impl ObstructionCertificate {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[CertificateEntry] {
        &self.entries
    }

    /// Re-checks every entry against `p`: completeness, tuple membership and
    /// the letter conditions.
    pub fn verify(&self, p: &Presentation) -> bool {
        let n = p.alphabet().n() as usize;
        if self.n as usize != n || self.entries.len() != (1usize << n) * n {
            return false;
        }
        let expected = SignVector::all(n).flat_map(|s| (1..=n).map(move |i| (s.clone(), i)));
        self.entries.iter().zip(expected).all(|(e, (signs, i))| {
            let w = &e.witness.word;
            e.signs == signs
                && e.index == i
                && !w.is_empty()
                && p.relators().get(e.witness.relator_index) == Some(w)
                && uses_only_positive_letters(w, &signs)
                && w.iter().any(|&l| l == signs.letter(i))
        })
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            verdict: VERDICT_CERTIFIED.to_string(),
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| CertificateFileEntry {
                    signs: e.signs.to_i32(),
                    i: e.index,
                    relator_index: e.witness.relator_index,
                    word: e.witness.word.clone(),
                })
                .collect(),
        }
    }
}

/// On-disk certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub verdict: String,
    pub n: u32,
    pub entries: Vec<CertificateFileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFileEntry {
    pub signs: Vec<i32>,
    pub i: usize,
    pub relator_index: usize,
    pub word: Word,
}

/// Outcome of a certificate search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified(ObstructionCertificate),
    /// The lexicographically smallest `(ε, i)` with no witness.
    NoCertificate { signs: SignVector, index: usize },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }

    pub fn certificate(&self) -> Option<&ObstructionCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::NoCertificate { .. } => None,
        }
    }

    pub fn verdict(&self) -> String {
        match self {
            Certification::Certified(_) => VERDICT_CERTIFIED.to_string(),
            Certification::NoCertificate { signs, index } => {
                format!("{VERDICT_NONE}: no witness for eps={signs} i={index}")
            }
        }
    }
}

/// Witness search by direct scan of the relator tuple.
pub fn certify_obstruction(p: &Presentation) -> Result<Certification> {
    certify_with(p, DEFAULT_MAX_GENERATORS, find_positive_relator)
}

/// [`certify_obstruction`] with an explicit bound on `n`.
pub fn certify_obstruction_with_budget(p: &Presentation, max_generators: u32) -> Result<Certification> {
    certify_with(p, max_generators, find_positive_relator)
}

/// Witness search through the sign automata: the witness for `(ε, i)` is the
/// first relator accepted by `A_{ε,i}`.
///
/// Accepted words must start with `a_i^{ε_i}`, so success here implies
/// success of [`certify_obstruction`] but not conversely.
pub fn certify_via_languages(p: &Presentation) -> Result<Certification> {
    certify_with(p, DEFAULT_MAX_GENERATORS, find_language_relator)
}

/// First relator accepted by `A_{ε,i}`.
pub fn find_language_relator(p: &Presentation, signs: &SignVector, i: usize) -> Option<Witness> {
    let a = make_sign_automaton(signs, i).ok()?;
    p.relators().iter().position(|r| a.accepts(r)).map(|k| Witness {
        relator_index: k,
        word: p.relators()[k].clone(),
    })
}

fn certify_with<F>(p: &Presentation, max_generators: u32, find: F) -> Result<Certification>
where
    F: Fn(&Presentation, &SignVector, usize) -> Option<Witness> + Sync,
{
    let n = p.alphabet().n();
    if n > max_generators || n > 40 {
        return Err(Error::Budget {
            what: "certificate search over (eps, i) pairs",
            required: format!("2^{n}*{n}"),
            limit: max_generators as u64,
        });
    }
    let n = n as usize;
    // Per sign vector: all witnesses, or the first failing index.
    let per_mask: Vec<std::result::Result<Vec<CertificateEntry>, usize>> = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let signs = SignVector::from_mask(n, mask);
            (1..=n)
                .map(|i| {
                    find(p, &signs, i)
                        .map(|witness| CertificateEntry {
                            signs: signs.clone(),
                            index: i,
                            witness,
                        })
                        .ok_or(i)
                })
                .collect()
        })
        .collect();
    let mut entries = Vec::with_capacity((1 << n) * n);
    for (mask, result) in per_mask.into_iter().enumerate() {
        match result {
            Ok(mut e) => entries.append(&mut e),
            Err(index) => {
                return Ok(Certification::NoCertificate {
                    signs: SignVector::from_mask(n, mask as u64),
                    index,
                })
            }
        }
    }
    Ok(Certification::Certified(ObstructionCertificate { n: n as u32, entries }))
}

/// How a witness for `(ε, i)` is looked up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessRoute {
    /// Any positive-cone relator containing `a_i^{ε_i}`.
    #[default]
    Scan,
    /// A relator accepted by `A_{ε,i}`.
    Languages,
}

impl WitnessRoute {
    pub fn find(self, p: &Presentation, signs: &SignVector, i: usize) -> Option<Witness> {
        match self {
            WitnessRoute::Scan => find_positive_relator(p, signs, i),
            WitnessRoute::Languages => find_language_relator(p, signs, i),
        }
    }
}

/// Certificate search along `route` with an explicit bound on `n`.
pub fn certify_with_route(p: &Presentation, route: WitnessRoute, max_generators: u32) -> Result<Certification> {
    certify_with(p, max_generators, |p, s, i| route.find(p, s, i))
}

/// Witness existence for every `(ε, i)`, in certificate order.
pub fn witness_hits(p: &Presentation, route: WitnessRoute) -> Vec<(SignVector, usize, bool)> {
    let n = p.alphabet().n() as usize;
    SignVector::all(n)
        .flat_map(|s| (1..=n).map(move |i| (s.clone(), i)))
        .map(|(s, i)| {
            let hit = route.find(p, &s, i).is_some();
            (s, i, hit)
        })
        .collect()
}
