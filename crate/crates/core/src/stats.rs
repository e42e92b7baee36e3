//! Hit counts of random tuples in a distinguished subset.
//!
//! A trial draws `b` entries independently and uniformly from a population of
//! size `c`, of which `a` are distinguished, and counts the distinguished
//! draws `D`. Exact quantities are rational; only empirical frequencies are
//! floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{ln_big, BAutomaton};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng, DOMAIN_CONCENTRATION, DOMAIN_DISTINCT, DOMAIN_SWEEP_BASE};
use crate::sampler::{compute_relator_count, sample_relators, Presentation};
use crate::words::{count_reduced, Alphabet};

/// Above this many draws the all-distinct probability is summed in `f64`
/// logs instead of multiplied out exactly.
pub const EXACT_PRODUCT_MAX_DRAWS: u64 = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitModelParams {
    /// Population size.
    pub c: u64,
    /// Distinguished elements.
    pub a: u64,
    /// Draws per trial.
    pub b: u64,
    /// Relative half-width of the concentration window.
    pub epsilon: f64,
}

impl HitModelParams {
    pub fn new(c: u64, a: u64, b: u64, epsilon: f64) -> Result<Self> {
        let p = HitModelParams { c, a, b, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.c == 0 || self.a == 0 || self.b == 0 {
            return Err(Error::InvalidParameter(format!(
                "need a, b, c > 0, got a = {}, b = {}, c = {}",
                self.a, self.b, self.c
            )));
        }
        if self.a > self.c {
            return Err(Error::InvalidParameter(format!("a = {} exceeds c = {}", self.a, self.c)));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        Ok(())
    }
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn big_rat(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `E D = ab/c` and `Var D = (ab/c)(1 - a/c)`.
pub fn moments(params: &HitModelParams) -> (BigRational, BigRational) {
    moments_big(&BigUint::from(params.c), &BigUint::from(params.a), params.b)
}

fn moments_big(c: &BigUint, a: &BigUint, b: u64) -> (BigRational, BigRational) {
    let p = big_rat(a) / big_rat(c);
    let mean = &p * rat(b);
    let var = &mean * (BigRational::one() - p);
    (mean, var)
}

/// `min(1, variance / alpha^2)`.
pub fn chebyshev_tail(variance: &BigRational, alpha: &BigRational) -> BigRational {
    assert!(alpha.is_positive(), "alpha must be positive");
    let bound = variance / (alpha * alpha);
    bound.min(BigRational::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distinctness {
    /// `prod_{j<b} (1 - j/c)`.
    pub exact: f64,
    /// `1 - b(b-1)/c`.
    pub bernoulli_lower: f64,
}

/// Probability that `b` uniform draws from `c` elements are pairwise distinct.
pub fn distinctness_probability(b: u64, c: &BigUint) -> Distinctness {
    assert!(b >= 1 && !c.is_zero(), "need b >= 1 and c >= 1");
    let bern = BigRational::one() - rat(b) * rat(b - 1) / big_rat(c);
    let exact = if BigUint::from(b) > *c {
        0.0
    } else if b <= EXACT_PRODUCT_MAX_DRAWS {
        let mut num = BigUint::one();
        for j in 0..b {
            num *= c - BigUint::from(j);
        }
        to_f64(&(big_rat(&num) / BigRational::from_integer(BigInt::from(c.pow(b as u32)))))
    } else {
        let cf = c.to_f64().unwrap_or(f64::INFINITY);
        (0..b).map(|j| (-(j as f64) / cf).ln_1p()).sum::<f64>().exp()
    };
    Distinctness {
        exact,
        bernoulli_lower: to_f64(&bern),
    }
}

/// Sample mean and unbiased variance with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleMoments {
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

impl SampleMoments {
    pub fn from_values(values: &[u64]) -> Self {
        let t = values.len() as f64;
        let mean = values.iter().map(|&v| v as f64).sum::<f64>() / t;
        let central = |k: i32| values.iter().map(|&v| (v as f64 - mean).powi(k)).sum::<f64>() / t;
        let m2 = central(2);
        let m4 = central(4);
        let variance = if values.len() > 1 { m2 * t / (t - 1.0) } else { 0.0 };
        SampleMoments {
            mean,
            variance,
            mean_se: (variance / t).sqrt(),
            variance_se: ((m4 - m2 * m2).max(0.0) / t).sqrt(),
        }
    }
}

/// Integer window `[lo, hi]` for `|D - mean| <= eps·mean`, and the tail
/// thresholds for `|D - mean| >= eps·mean`.
#[derive(Debug, Clone, Copy)]
struct Window {
    lo: i128,
    hi: i128,
    tail_below: i128,
    tail_above: i128,
}

impl Window {
    fn new(mean: &BigRational, epsilon: f64) -> Result<Self> {
        let eps = BigRational::from_float(epsilon)
            .ok_or_else(|| Error::InvalidParameter(format!("epsilon {epsilon} is not finite")))?;
        let alpha = mean * eps;
        let int = |r: BigRational| r.to_integer().to_i128().unwrap_or(i128::MAX);
        Ok(Window {
            lo: int((mean - &alpha).ceil()),
            hi: int((mean + &alpha).floor()),
            tail_below: int((mean - &alpha).floor()),
            tail_above: int((mean + &alpha).ceil()),
        })
    }

    fn inside(&self, d: u64) -> bool {
        (self.lo..=self.hi).contains(&(d as i128))
    }

    fn in_tail(&self, d: u64) -> bool {
        let d = d as i128;
        d <= self.tail_below || d >= self.tail_above
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub params: HitModelParams,
    pub trials: u64,
    pub empirical_in_window: f64,
    pub mean_exact: f64,
    pub var_exact: f64,
    /// `min(1, var / (eps·mean)^2)`.
    pub chebyshev_bound: f64,
    /// Fraction of trials with `|D - mean| >= eps·mean`.
    pub empirical_tail: f64,
    pub empirical: SampleMoments,
    pub q_exact: f64,
    pub q_bernoulli: f64,
    pub empirical_all_distinct: f64,
}

#[derive(Debug, Clone, Copy)]
struct Trial {
    hits: u64,
    all_distinct: bool,
}

fn draw_trial(rng: &mut StreamRng, c: u64, a: u64, b: u64) -> Trial {
    let draws: Vec<u64> = (0..b).map(|_| rng.random_range(0..c)).collect();
    let hits = draws.iter().filter(|&&x| x < a).count() as u64;
    let all_distinct = b <= c && {
        let mut sorted = draws;
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    };
    Trial { hits, all_distinct }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    Ok(())
}

/// Monte Carlo estimate of `P((1-eps)·mean <= D <= (1+eps)·mean)` alongside
/// the exact moments. Trial `t` uses its own stream, so the report does not
/// depend on scheduling.
pub fn run_concentration_experiment(params: &HitModelParams, trials: u64, seed: u64) -> Result<ConcentrationReport> {
    params.validate()?;
    check_trials(trials)?;
    let (mean, var) = moments(params);
    let window = Window::new(&mean, params.epsilon)?;
    let alpha = &mean * BigRational::from_float(params.epsilon).expect("validated");
    let cheb = chebyshev_tail(&var, &alpha);
    let q = distinctness_probability(params.b, &BigUint::from(params.c));
    let HitModelParams { c, a, b, .. } = *params;
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| draw_trial(&mut stream_rng(seed, DOMAIN_CONCENTRATION, t), c, a, b))
        .collect();
    let hits: Vec<u64> = outcomes.iter().map(|o| o.hits).collect();
    let frac = |pred: &dyn Fn(&Trial) -> bool| outcomes.iter().filter(|o| pred(o)).count() as f64 / trials as f64;
    Ok(ConcentrationReport {
        params: *params,
        trials,
        empirical_in_window: frac(&|o| window.inside(o.hits)),
        mean_exact: to_f64(&mean),
        var_exact: to_f64(&var),
        chebyshev_bound: to_f64(&cheb),
        empirical_tail: frac(&|o| window.in_tail(o.hits)),
        empirical: SampleMoments::from_values(&hits),
        q_exact: q.exact,
        q_bernoulli: q.bernoulli_lower,
        empirical_all_distinct: frac(&|o| o.all_distinct),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinctnessReport {
    pub b: u64,
    pub c: String,
    pub trials: u64,
    pub q_exact: f64,
    pub q_bernoulli: f64,
    pub empirical_all_distinct: f64,
    /// Binomial standard error of `empirical_all_distinct` around `q_exact`.
    pub standard_error: f64,
}

impl DistinctnessReport {
    fn new(b: u64, c: &BigUint, trials: u64, distinct: u64) -> Self {
        let q = distinctness_probability(b, c);
        DistinctnessReport {
            b,
            c: c.to_string(),
            trials,
            q_exact: q.exact,
            q_bernoulli: q.bernoulli_lower,
            empirical_all_distinct: distinct as f64 / trials as f64,
            standard_error: (q.exact * (1.0 - q.exact) / trials as f64).sqrt(),
        }
    }
}

/// Frequency with which `b` uniform draws from `0..c` are pairwise distinct.
pub fn run_distinctness_experiment(b: u64, c: u64, trials: u64, seed: u64) -> Result<DistinctnessReport> {
    if b == 0 || c == 0 {
        return Err(Error::InvalidParameter("need b, c >= 1".into()));
    }
    check_trials(trials)?;
    let distinct = (0..trials)
        .into_par_iter()
        .filter(|&t| draw_trial(&mut stream_rng(seed, DOMAIN_DISTINCT, t), c, 0, b).all_distinct)
        .count() as u64;
    Ok(DistinctnessReport::new(b, &BigUint::from(c), trials, distinct))
}

/// Relator tuple of trial `trial` in a sweep at length `length`. Sweeps over
/// several lengths and trials draw every tuple from its own stream.
pub fn sweep_presentation(n: u32, d: f64, length: usize, seed: u64, trial: u64) -> Result<Presentation> {
    let alphabet = Alphabet::new(n)?;
    let count = compute_relator_count(n, d, length)?;
    let mut rng = sweep_rng(seed, length, trial);
    Presentation::new(alphabet, sample_relators(alphabet, length, count, &mut rng))
}

pub fn sweep_rng(seed: u64, length: usize, trial: u64) -> StreamRng {
    stream_rng(seed, DOMAIN_SWEEP_BASE + length as u64, trial)
}

/// How often a sampled relator tuple contains a repeated entry, compared
/// with `1 - q` for `b = ⌊(2n-1)^(dL)⌋`, `c = |R_L|`.
pub fn run_relator_repeat_experiment(n: u32, d: f64, length: usize, trials: u64, seed: u64) -> Result<DistinctnessReport> {
    check_trials(trials)?;
    let alphabet = Alphabet::new(n)?;
    let b = compute_relator_count(n, d, length)?;
    let c = count_reduced(alphabet, length);
    let distinct = (0..trials)
        .into_par_iter()
        .map(|t| sweep_presentation(n, d, length, seed, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| {
            let mut rels = p.relators().to_vec();
            rels.sort_unstable();
            rels.windows(2).all(|w| w[0] != w[1])
        })
        .count() as u64;
    Ok(DistinctnessReport::new(b, &c, trials, distinct))
}

/// Density `d'` of the fixed set from exact counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedSetDensity {
    pub d_prime: Option<f64>,
    /// Lengths whose counts gave `d'`.
    pub lengths: (usize, usize),
}

/// `d' = log_{2n-1}(a_{L2} / a_{L1}) / (L2 - L1)` with `L1`, `L2` the
/// smallest and largest requested lengths (`L-1`, `L` for a single length).
pub fn fixed_set_density(fixed: &BAutomaton, lengths: &[usize]) -> Result<FixedSetDensity> {
    let lo = *lengths.iter().min().ok_or_else(|| Error::InvalidParameter("empty length list".into()))?;
    let hi = *lengths.iter().max().expect("non-empty");
    let (l1, l2) = if lo < hi { (lo, hi) } else { (lo.saturating_sub(1).max(1), hi) };
    if l1 == l2 {
        return Err(Error::InvalidParameter("need a length >= 2 to estimate the density".into()));
    }
    let base = (2 * fixed.alphabet().n() - 1) as f64;
    let a1 = fixed.count_language_reduced(l1);
    let a2 = fixed.count_language_reduced(l2);
    let d_prime = (base > 1.0 && !a1.is_zero() && !a2.is_zero())
        .then(|| (ln_big(&a2) - ln_big(&a1)) / ((l2 - l1) as f64 * base.ln()));
    Ok(FixedSetDensity {
        d_prime,
        lengths: (l1, l2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionRow {
    #[serde(rename = "L")]
    pub length: usize,
    /// `|R_L|`.
    pub c: String,
    /// `|R_f ∩ R_L|`.
    pub a: String,
    /// Relators per tuple.
    pub b: u64,
    pub mean_exact: f64,
    pub var_exact: f64,
    pub cheb_bound: f64,
    pub empirical_in_window: f64,
    pub q_exact: f64,
    pub q_bernoulli: f64,
    /// Mean number of tuple entries in `R_f`, repetitions counted.
    pub hits_mean: f64,
    /// Mean number of distinct tuple entries in `R_f`.
    pub hits_distinct_mean: f64,
    /// `hits_distinct_mean / (2n-1)^((d+d'-1)L)`.
    pub envelope_ratio: f64,
    /// Fraction of trials whose tuple meets `R_f`.
    pub intersect_fraction: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub n: u32,
    pub d: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub density: FixedSetDensity,
    /// `d + d' > 1`.
    pub hypothesis_holds: bool,
    /// `d < 1/2`, needed for the distinct-entries count.
    pub distinct_claim_applies: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<IntersectionRow>,
}

/// Samples relator tuples at density `d` for each length and counts entries
/// accepted by `fixed`. Parameters outside `d + d' > 1` still run, with a
/// warning in the report.
pub fn run_intersection_experiment(
    fixed: &BAutomaton,
    d: f64,
    lengths: &[usize],
    trials: u64,
    epsilon: f64,
    seed: u64,
) -> Result<IntersectionReport> {
    check_trials(trials)?;
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {epsilon}")));
    }
    let alphabet = fixed.alphabet();
    let n = alphabet.n();
    let density = fixed_set_density(fixed, lengths)?;
    let hypothesis_holds = density.d_prime.is_some_and(|dp| d + dp > 1.0);
    let distinct_claim_applies = d < 0.5;
    let mut warnings = Vec::new();
    if !hypothesis_holds {
        warnings.push(format!(
            "d + d' = {} is not > 1; outside the intersection hypothesis",
            density.d_prime.map_or("undefined".to_string(), |dp| (d + dp).to_string())
        ));
    }
    if !distinct_claim_applies {
        warnings.push(format!("d = {d} is not < 1/2; distinct-entry envelope not covered"));
    }
    let base = (2 * n - 1) as f64;
    let rows = lengths
        .iter()
        .map(|&length| {
            let b = compute_relator_count(n, d, length)?;
            let c = count_reduced(alphabet, length);
            let a = fixed.count_language_reduced(length);
            let (mean, var) = moments_big(&c, &a, b);
            let window = Window::new(&mean, epsilon)?;
            let alpha = &mean * BigRational::from_float(epsilon).expect("checked");
            let cheb = if alpha.is_positive() {
                to_f64(&chebyshev_tail(&var, &alpha))
            } else {
                1.0
            };
            let q = distinctness_probability(b, &c);
            let per_trial: Vec<(u64, u64)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let p = sweep_presentation(n, d, length, seed, t)?;
                    let mut hit: Vec<_> = p.relators().iter().filter(|r| fixed.accepts(r)).collect();
                    let total = hit.len() as u64;
                    hit.sort_unstable();
                    hit.dedup();
                    Ok((total, hit.len() as u64))
                })
                .collect::<Result<_>>()?;
            let tf = trials as f64;
            let hits_mean = per_trial.iter().map(|p| p.0 as f64).sum::<f64>() / tf;
            let hits_distinct_mean = per_trial.iter().map(|p| p.1 as f64).sum::<f64>() / tf;
            let scale = density
                .d_prime
                .map(|dp| base.powf((d + dp - 1.0) * length as f64))
                .unwrap_or(f64::NAN);
            Ok(IntersectionRow {
                length,
                c: c.to_string(),
                a: a.to_string(),
                b,
                mean_exact: to_f64(&mean),
                var_exact: to_f64(&var),
                cheb_bound: cheb,
                empirical_in_window: per_trial.iter().filter(|p| window.inside(p.0)).count() as f64 / tf,
                q_exact: q.exact,
                q_bernoulli: q.bernoulli_lower,
                hits_mean,
                hits_distinct_mean,
                envelope_ratio: hits_distinct_mean / scale,
                intersect_fraction: per_trial.iter().filter(|p| p.0 > 0).count() as f64 / tf,
                trials,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntersectionReport {
        n,
        d,
        epsilon,
        seed,
        density,
        hypothesis_holds,
        distinct_claim_applies,
        warnings,
        rows,
    })
}

/// `1 - (1 - a/c)^b`: chance that a tuple meets the fixed set.
pub fn intersect_probability(a: &BigUint, c: &BigUint, b: u64) -> f64 {
    let miss = 1.0 - to_f64(&(big_rat(a) / big_rat(c)));
    1.0 - miss.powf(b as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::make_sign_automaton;
    use crate::order::SignVector;

    fn params(c: u64, a: u64, b: u64, eps: f64) -> HitModelParams {
        HitModelParams::new(c, a, b, eps).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn moments_examples() {
        let (mean, var) = moments(&params(10, 3, 5, 0.5));
        assert_eq!(mean, r(3, 2));
        assert_eq!(var, r(21, 20));
        let (mean, var) = moments(&params(10, 10, 7, 0.5));
        assert_eq!(mean, r(7, 1));
        assert!(var.is_zero());
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_tail(&r(105, 100), &r(2, 1)), r(2625, 10000));
        assert!(chebyshev_tail(&BigRational::zero(), &r(1, 1)).is_zero());
        assert_eq!(chebyshev_tail(&r(5, 1), &r(1, 1)), r(1, 1));
    }

    #[test]
    fn distinctness_examples() {
        let q = distinctness_probability(3, &BigUint::from(10u32));
        assert!((q.exact - 0.72).abs() < 1e-15);
        assert!((q.bernoulli_lower - 0.4).abs() < 1e-15);
        let q = distinctness_probability(1, &BigUint::from(10u32));
        assert_eq!((q.exact, q.bernoulli_lower), (1.0, 1.0));
        assert_eq!(distinctness_probability(11, &BigUint::from(10u32)).exact, 0.0);
    }

    #[test]
    fn distinctness_log_path_matches_exact() {
        let c = BigUint::from(10_000_000_000u64);
        let b = EXACT_PRODUCT_MAX_DRAWS;
        let exact = distinctness_probability(b, &c).exact;
        let cf = 1e10;
        let logsum = (0..b).map(|j| (-(j as f64) / cf).ln_1p()).sum::<f64>().exp();
        assert!((exact - logsum).abs() < 1e-9);
    }

    #[test]
    fn invalid_params() {
        assert!(HitModelParams::new(10, 11, 5, 0.5).is_err());
        assert!(HitModelParams::new(10, 0, 5, 0.5).is_err());
        assert!(HitModelParams::new(10, 3, 5, 0.0).is_err());
        assert!(run_concentration_experiment(&params(10, 3, 5, 0.5), 0, 1).is_err());
    }

    #[test]
    fn all_distinguished_is_always_in_window() {
        for eps in [0.01, 0.5, 3.0] {
            let rep = run_concentration_experiment(&params(10, 10, 6, eps), 500, 9).unwrap();
            assert_eq!(rep.empirical_in_window, 1.0);
            assert_eq!(rep.empirical.mean, 6.0);
        }
    }

    #[test]
    fn concentration_deterministic() {
        let p = params(10, 3, 5, 0.5);
        assert_eq!(
            run_concentration_experiment(&p, 2000, 7).unwrap(),
            run_concentration_experiment(&p, 2000, 7).unwrap()
        );
    }

    #[test]
    fn concentration_moments_and_chebyshev() {
        let p = params(10, 3, 5, 0.5);
        let rep = run_concentration_experiment(&p, 100_000, 1).unwrap();
        assert!((rep.empirical.mean - 1.5).abs() <= 3.0 * rep.empirical.mean_se);
        assert!((rep.empirical.variance - 1.05).abs() <= 3.0 * rep.empirical.variance_se);
        assert!(rep.empirical_tail <= rep.chebyshev_bound);
        assert!(rep.empirical_in_window >= 1.0 - rep.chebyshev_bound);
        // 10·9·8·7·6 / 10^5
        assert!((rep.q_exact - 0.3024).abs() < 1e-15);
        let se = (0.3024f64 * 0.6976 / 1e5).sqrt();
        assert!((rep.empirical_all_distinct - 0.3024).abs() <= 3.0 * se);
    }

    #[test]
    fn chebyshev_tail_at_alpha_two() {
        // eps = 4/3 gives alpha = 2 at mean 1.5
        let p = params(10, 3, 5, 4.0 / 3.0);
        let rep = run_concentration_experiment(&p, 100_000, 2).unwrap();
        assert!((rep.chebyshev_bound - 0.2625).abs() < 1e-12);
        assert!(rep.empirical_tail <= rep.chebyshev_bound);
    }

    #[test]
    fn concentration_trend() {
        let mut last = 0.0;
        for b in [20, 40, 80, 160, 320] {
            let rep = run_concentration_experiment(&params(1000, 100, b, 0.5), 5000, 3).unwrap();
            assert!(rep.empirical_in_window >= 1.0 - rep.chebyshev_bound);
            assert!(rep.empirical_in_window + 0.02 >= last);
            last = rep.empirical_in_window;
        }
        assert!(last > 0.99);
    }

    #[test]
    fn distinctness_simulation() {
        let rep = run_distinctness_experiment(3, 10, 100_000, 5).unwrap();
        assert!((rep.empirical_all_distinct - rep.q_exact).abs() <= 3.0 * rep.standard_error);
        assert!(rep.empirical_all_distinct >= rep.q_bernoulli);
    }

    #[test]
    fn relator_repeats_match_q() {
        let rep = run_relator_repeat_experiment(2, 0.5, 6, 1000, 11).unwrap();
        assert_eq!(rep.b, 27);
        assert_eq!(rep.c, "972");
        assert!((rep.empirical_all_distinct - rep.q_exact).abs() <= 3.0 * rep.standard_error);
    }

    #[test]
    fn fixed_set_density_of_sign_language() {
        let a = make_sign_automaton(&SignVector::from_i32(&[1, 1]).unwrap(), 1).unwrap();
        let dens = fixed_set_density(&a, &[6, 8, 10]).unwrap();
        assert!((dens.d_prime.unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert_eq!(dens.lengths, (6, 10));
        assert_eq!(fixed_set_density(&a, &[7]).unwrap().lengths, (6, 7));
    }

    #[test]
    fn full_fixed_set_hits_every_entry() {
        let full = BAutomaton::full(Alphabet::new(2).unwrap());
        let rep = run_intersection_experiment(&full, 0.4, &[4, 6], 50, 0.5, 3).unwrap();
        for row in &rep.rows {
            assert_eq!(row.a, row.c);
            assert_eq!(row.hits_mean, row.b as f64);
            assert_eq!(row.intersect_fraction, 1.0);
            assert_eq!(row.empirical_in_window, 1.0);
        }
        assert!((rep.density.d_prime.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intersection_exact_quantities() {
        let a = make_sign_automaton(&SignVector::from_i32(&[1, 1]).unwrap(), 1).unwrap();
        let rep = run_intersection_experiment(&a, 0.5, &[6, 8], 40, 0.5, 1).unwrap();
        assert!(rep.hypothesis_holds);
        assert!(!rep.distinct_claim_applies);
        assert_eq!(rep.warnings.len(), 1);
        let row = &rep.rows[0];
        assert_eq!((row.c.as_str(), row.a.as_str(), row.b), ("972", "32", 27));
        assert!((row.mean_exact - 32.0 * 27.0 / 972.0).abs() < 1e-12);
        assert!(row.hits_distinct_mean <= row.hits_mean);

        let low = run_intersection_experiment(&a, 0.3, &[6, 8], 5, 0.5, 1).unwrap();
        assert!(!low.hypothesis_holds);
    }
}
