//! Random relator tuples in the density model.
//!
//! A sample at density `d` and length `L` is a tuple of
//! `b_L = floor((2n-1)^(dL))` independent uniform draws from `R_L`.
//! Repetitions are kept and the tuple order is the draw order.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, DOMAIN_SAMPLER};
use crate::words::{sample_reduced, Alphabet, Word};

/// Default cap on `b_L`.
pub const DEFAULT_RELATOR_CAP: u64 = 1 << 32;

/// Largest reduced denominator of `dL` for which the floor is taken by an
/// exact integer root. Larger denominators fall back to guarded `f64`.
const EXACT_ROOT_MAX_DENOMINATOR: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: u32,
    pub d: f64,
    #[serde(rename = "L")]
    pub length: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_override: Option<u64>,
}

impl SamplerConfig {
    pub fn new(n: u32, d: f64, length: usize, seed: u64) -> Self {
        SamplerConfig {
            n,
            d,
            length,
            seed,
            count_override: None,
        }
    }

    pub fn with_count(mut self, count: u64) -> Self {
        self.count_override = Some(count);
        self
    }

    pub fn validate(&self) -> Result<()> {
        Alphabet::new(self.n)?;
        check_density(self.d)?;
        if self.length == 0 {
            return Err(Error::InvalidParameter("relator length L must be >= 1".into()));
        }
        if self.count_override == Some(0) {
            return Err(Error::InvalidParameter("relator count must be >= 1".into()));
        }
        Ok(())
    }

    /// Tuple size this configuration produces.
    pub fn relator_count(&self) -> Result<u64> {
        match self.count_override {
            Some(c) => Ok(c),
            None => compute_relator_count(self.n, self.d, self.length),
        }
    }
}

fn check_density(d: f64) -> Result<()> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::InvalidParameter(format!("density must lie in (0, 1), got {d}")));
    }
    Ok(())
}

/// `floor((2n-1)^(dL))` with the default cap.
pub fn compute_relator_count(n: u32, d: f64, length: usize) -> Result<u64> {
    compute_relator_count_capped(n, d, length, DEFAULT_RELATOR_CAP)
}

/// `floor((2n-1)^(dL))`, rejecting values above `cap`.
///
/// `d` is read as the decimal it prints as (`0.3` is `3/10`), so `dL = p/q`
/// exactly. For `q = 1` the power is computed exactly; for moderate `q` the
/// floor is the integer `q`-th root of `(2n-1)^p`. Only very long decimals
/// go through floating point, and those fail with
/// [`Error::BoundaryAmbiguous`] when the value sits too close to an integer.
pub fn compute_relator_count_capped(n: u32, d: f64, length: usize, cap: u64) -> Result<u64> {
    Alphabet::new(n)?;
    check_density(d)?;
    if length == 0 {
        return Err(Error::InvalidParameter("relator length L must be >= 1".into()));
    }
    let base = 2 * n - 1;
    let too_big = |value: String| Error::SizeLimit {
        what: "relator count b_L",
        value,
        cap,
    };
    if base == 1 {
        return if cap >= 1 { Ok(1) } else { Err(too_big("1".into())) };
    }

    let (num, den) = decimal_ratio(d)?;
    let num = num * BigUint::from(length);
    let g = num.gcd(&den);
    let (p, q) = (num / &g, den / &g);

    // Reject hopeless sizes before any big-integer work.
    let log_value = p.to_f64().unwrap_or(f64::INFINITY) / q.to_f64().unwrap_or(f64::INFINITY)
        * (base as f64).ln();
    if log_value > (cap as f64).ln() + 1.0 {
        return Err(too_big(format!("~e^{log_value:.1}")));
    }

    let value = match q.to_u64() {
        Some(1) => BigUint::from(base).pow(p.to_u32().expect("exponent bounded by cap check")),
        Some(q) if q <= EXACT_ROOT_MAX_DENOMINATOR => {
            let power = BigUint::from(base).pow(p.to_u32().expect("exponent bounded by cap check"));
            power.nth_root(q as u32)
        }
        _ => BigUint::from(guarded_float_floor(base, p.to_f64().unwrap() / q.to_f64().unwrap())?),
    };
    match value.to_u64() {
        Some(v) if v <= cap => Ok(v),
        _ => Err(too_big(value.to_string())),
    }
}

// Exact rational value of the shortest decimal that round-trips to `x`.
fn decimal_ratio(x: f64) -> Result<(BigUint, BigUint)> {
    let text = format!("{x}");
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigUint = digits.parse().map_err(|_| Error::Parse {
        what: "density",
        detail: text.clone(),
    })?;
    let den = BigUint::from(10u32).pow(frac_part.len() as u32);
    Ok((num, den))
}

fn guarded_float_floor(base: u32, exponent: f64) -> Result<u64> {
    let x = (exponent * (base as f64).ln()).exp();
    let nearest = x.round();
    // f64 carries ~2^-46 relative error here; keep a wide margin.
    let guard = 2f64.powi(-30) + x * 2f64.powi(-40);
    if (x - nearest).abs() < guard {
        return Err(Error::BoundaryAmbiguous { base, exponent });
    }
    Ok(x.floor() as u64)
}

/// `<S | R>` with `R` an ordered tuple of relators.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    provenance: Option<SamplerConfig>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            alphabet.check_word(r)?;
        }
        Ok(Presentation {
            alphabet,
            relators,
            provenance: None,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn provenance(&self) -> Option<&SamplerConfig> {
        self.provenance.as_ref()
    }

    /// Common relator length, if the tuple is non-empty and uniform.
    pub fn relator_length(&self) -> Option<usize> {
        let first = self.relators.first()?.len();
        self.relators.iter().all(|r| r.len() == first).then_some(first)
    }

    pub fn push(&mut self, relator: Word) -> Result<()> {
        self.alphabet.check_word(&relator)?;
        self.relators.push(relator);
        Ok(())
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            n: self.alphabet.n(),
            length: self
                .provenance
                .as_ref()
                .map(|c| c.length)
                .or_else(|| self.relator_length()),
            d: self.provenance.as_ref().map(|c| c.d),
            seed: self.provenance.as_ref().map(|c| c.seed),
            relators: self.relators.clone(),
        }
    }

    pub fn from_file(file: PresentationFile) -> Result<Self> {
        let alphabet = Alphabet::new(file.n)?;
        let mut p = Presentation::new(alphabet, file.relators)?;
        if let (Some(d), Some(seed), Some(length)) = (file.d, file.seed, file.length) {
            let mut config = SamplerConfig::new(file.n, d, length, seed);
            if config.relator_count().ok() != Some(p.relators.len() as u64) {
                config.count_override = Some(p.relators.len() as u64);
            }
            p.provenance = Some(config);
        }
        Ok(p)
    }

    pub fn to_json(&self, indent: Option<usize>) -> String {
        crate::json::to_string(&self.to_file(), indent)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "presentation JSON",
            detail: e.to_string(),
        })?;
        Presentation::from_file(file)
    }
}

/// On-disk presentation:
/// `{ "n": int, "L": int, "d": float|null, "seed": int|null, "relators": [[int]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub n: u32,
    #[serde(rename = "L")]
    pub length: Option<usize>,
    pub d: Option<f64>,
    pub seed: Option<u64>,
    pub relators: Vec<Word>,
}

/// `count` independent uniform draws from `R_L`, in draw order.
pub fn sample_relators<R: Rng + ?Sized>(
    alphabet: Alphabet,
    length: usize,
    count: u64,
    rng: &mut R,
) -> Vec<Word> {
    (0..count).map(|_| sample_reduced(alphabet, length, rng)).collect()
}

/// The random relator tuple described by `config`. Pure in `config`.
pub fn sample_relator_set(config: &SamplerConfig) -> Result<Presentation> {
    config.validate()?;
    let count = config.relator_count()?;
    let alphabet = Alphabet::new(config.n)?;
    let mut rng = stream_rng(config.seed, DOMAIN_SAMPLER, 0);
    let relators = sample_relators(alphabet, config.length, count, &mut rng);
    Ok(Presentation {
        alphabet,
        relators,
        provenance: Some(config.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relator_count_examples() {
        assert_eq!(compute_relator_count(2, 0.5, 4).unwrap(), 9);
        assert_eq!(compute_relator_count(3, 0.5, 2).unwrap(), 5);
        // 3^1.5 = 5.196..., floor 5
        assert_eq!(compute_relator_count(2, 0.3, 5).unwrap(), 5);
        assert_eq!(compute_relator_count(1, 0.3, 50).unwrap(), 1);
    }

    #[test]
    fn relator_count_matches_float_away_from_boundaries() {
        for n in 2..=4u32 {
            for &d in &[0.1, 0.25, 0.37, 0.5, 0.61, 0.9] {
                for length in 1..=12 {
                    let x = ((2 * n - 1) as f64).powf(d * length as f64);
                    if (x - x.round()).abs() < 1e-6 {
                        continue;
                    }
                    let got = compute_relator_count(n, d, length).unwrap();
                    assert_eq!(got, x.floor() as u64, "n={n} d={d} L={length}");
                }
            }
        }
    }

    #[test]
    fn exact_powers_do_not_misfloor() {
        // 0.1 * 10 = 1 exactly as a decimal, though not in binary.
        assert_eq!(compute_relator_count(2, 0.1, 10).unwrap(), 3);
        assert_eq!(compute_relator_count(3, 0.2, 15).unwrap(), 125);
        assert_eq!(compute_relator_count(2, 0.7, 20).unwrap(), 3u64.pow(14));
    }

    #[test]
    fn relator_count_cap() {
        let err = compute_relator_count(2, 0.9, 40).unwrap_err();
        assert!(err.is_budget(), "{err}");
        assert_eq!(compute_relator_count_capped(2, 0.5, 4, 9).unwrap(), 9);
        assert!(compute_relator_count_capped(2, 0.5, 4, 8).unwrap_err().is_budget());
    }

    #[test]
    fn invalid_parameters() {
        assert!(compute_relator_count(2, 0.0, 4).is_err());
        assert!(compute_relator_count(2, 1.0, 4).is_err());
        assert!(compute_relator_count(2, 0.5, 0).is_err());
        assert!(compute_relator_count(0, 0.5, 4).is_err());
        assert!(SamplerConfig::new(2, 0.5, 4, 1).with_count(0).validate().is_err());
    }

    #[test]
    fn sample_is_deterministic() {
        let config = SamplerConfig::new(2, 0.5, 4, 42);
        let p = sample_relator_set(&config).unwrap();
        assert_eq!(p.relators().len(), 9);
        for r in p.relators() {
            assert_eq!(r.len(), 4);
            assert!(r.is_reduced());
        }
        let again = sample_relator_set(&config).unwrap();
        assert_eq!(p.to_json(None), again.to_json(None));
    }

    #[test]
    fn count_override() {
        let config = SamplerConfig::new(2, 0.5, 6, 1).with_count(1);
        assert_eq!(sample_relator_set(&config).unwrap().relators().len(), 1);
    }

    #[test]
    fn json_round_trip_keeps_provenance() {
        let p = sample_relator_set(&SamplerConfig::new(2, 0.5, 4, 42)).unwrap();
        let text = p.to_json(None);
        assert!(text.starts_with("{\"n\":2,\"L\":4,\"d\":0.5,\"seed\":42,\"relators\":[["));
        let back = Presentation::from_json(&text).unwrap();
        assert_eq!(back, p);

        let bare = Presentation::from_json(r#"{"n":2,"L":null,"d":null,"seed":null,"relators":[[1],[2,-1]]}"#).unwrap();
        assert!(bare.provenance().is_none());
        assert_eq!(bare.relator_length(), None);
        assert!(Presentation::from_json(r#"{"n":1,"L":1,"d":null,"seed":null,"relators":[[2]]}"#).is_err());
    }
}
