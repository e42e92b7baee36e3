use num_bigint::BigUint;
use proptest::prelude::*;

use randgroup_core::blocks::{build_block_alphabet, derive_reduced_automaton, in_block_language};
use randgroup_core::{
    associate_word, certify_obstruction, certify_via_languages, estimate_growth, make_sign_automaton,
    sample_relator_set, Alphabet, BAutomaton, BlockWord, Letter, LetterSet, Presentation, SamplerConfig, SignVector,
    Word,
};

fn alphabet(n: u32) -> Alphabet {
    Alphabet::new(n).unwrap()
}

fn letter_set(n: u32) -> impl Strategy<Value = LetterSet> {
    prop::collection::vec(any::<bool>(), 2 * n as usize).prop_map(|bits| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Letter::from_index(i))
            .collect()
    })
}

fn automaton(n: u32) -> impl Strategy<Value = BAutomaton> {
    (letter_set(n), prop::collection::vec(letter_set(n), 2 * n as usize))
        .prop_map(move |(initial, follow)| BAutomaton::new(alphabet(n), initial, follow).unwrap())
}

fn any_automaton() -> impl Strategy<Value = BAutomaton> {
    (1u32..=3).prop_flat_map(automaton)
}

fn reduced_word(n: u32, len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..(2 * n as usize - 1).max(1), len).prop_map(move |choices| {
        let mut out: Vec<Letter> = Vec::with_capacity(len);
        for (k, c) in choices.into_iter().enumerate() {
            let letter = if k == 0 {
                Letter::from_index(c % (2 * n as usize))
            } else {
                // skip the inverse of the previous letter
                let banned = out[k - 1].inverse().index();
                Letter::from_index(if c >= banned { c + 1 } else { c })
            };
            out.push(letter);
        }
        Word::new(out)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn presentation_json_round_trip(n in 1u32..=4, d in 0.05f64..0.95, len in 1usize..=7, seed in any::<u64>()) {
        let p = sample_relator_set(&SamplerConfig::new(n, d, len, seed)).unwrap();
        for r in p.relators() {
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.len(), len);
        }
        let back = Presentation::from_json(&p.to_json(None)).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_json(Some(2)), p.to_json(Some(2)));
    }

    #[test]
    fn language_route_implies_scan_route(seed in any::<u64>(), len in 1usize..=4, count in 1u64..=30) {
        let p = sample_relator_set(&SamplerConfig::new(2, 0.5, len, seed).with_count(count)).unwrap();
        let scan = certify_obstruction(&p).unwrap();
        let lang = certify_via_languages(&p).unwrap();
        if let Some(c) = lang.certificate() {
            prop_assert!(c.verify(&p));
            prop_assert!(scan.is_certified());
        }
        if let Some(c) = scan.certificate() {
            prop_assert!(c.verify(&p));
        }
    }

    #[test]
    fn automaton_json_round_trip(a in any_automaton()) {
        let back = BAutomaton::from_json(&a.to_json(None)).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn enumeration_matches_counts(a in any_automaton(), len in 1usize..=5) {
        let words = a.enumerate_language(len);
        prop_assert_eq!(BigUint::from(words.len()), a.count_language_words(len));
        let reduced = words.iter().filter(|w| w.is_reduced()).count();
        prop_assert_eq!(BigUint::from(reduced), a.count_language_reduced(len));
        prop_assert!(words.iter().all(|w| a.accepts(w)));
    }

    #[test]
    fn associate_inverts_expand(
        (n, b, w) in (1u32..=3, 1usize..=3, 1usize..=5)
            .prop_flat_map(|(n, b, k)| (Just(n), Just(b), reduced_word(n, b * k)))
    ) {
        let ba = build_block_alphabet(n, b).unwrap();
        let hat = associate_word(&w, &ba).unwrap();
        prop_assert_eq!(hat.len() * b, w.len());
        prop_assert_eq!(ba.expand(&hat), w);
    }

    #[test]
    fn reduced_automaton_accepts_only_reduced_expansions(a in automaton(6), hat_len in 1usize..=3) {
        let ba = build_block_alphabet(2, 2).unwrap();
        let red = derive_reduced_automaton(&a, &ba).unwrap();
        for h in red.enumerate_language(hat_len) {
            let w = ba.expand(&BlockWord::new(h));
            prop_assert!(w.is_reduced());
            prop_assert!(in_block_language(&w, &a, &ba).unwrap());
        }
    }
}

#[test]
fn sign_language_growth() {
    for n in 1..=3 {
        let a = make_sign_automaton(&SignVector::all(n).next().unwrap(), 1).unwrap();
        let g = estimate_growth(&a, 2, 10, true).unwrap();
        assert_eq!(g.growth_rate_lower, n as f64);
        if n == 1 {
            assert_eq!(g.density_lower, None);
        } else {
            let expected = (n as f64).ln() / ((2 * n - 1) as f64).ln();
            assert!((g.density_lower.unwrap() - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn full_automaton_growth() {
    let full = BAutomaton::full(alphabet(2));
    let words = estimate_growth(&full, 1, 8, false).unwrap();
    let reduced = estimate_growth(&full, 1, 8, true).unwrap();
    assert_eq!(words.growth_rate_lower, 4.0);
    assert_eq!(reduced.growth_rate_lower, 3.0);
    assert!((reduced.density_lower.unwrap() - 1.0).abs() < 1e-12);
    assert!((reduced.constant - 4.0 / 3.0).abs() < 1e-9);
}
