use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use randgroup_core::stats::{intersect_probability, sweep_presentation};
use randgroup_core::{
    build_associated_set, build_block_alphabet, certify_with_route, count_reduced, make_sign_automaton, witness_hits,
    Alphabet, BlockAlphabet, Error, Sign, SignVector, WitnessRoute,
};

use crate::run::Run;
use crate::Status;

/// Hit columns grow as `2^n · n`; keep the CSV readable.
const MAX_PIPELINE_GENERATORS: u32 = 8;

#[derive(Args, Serialize)]
pub struct PipelineArgs {
    /// Sweep configuration (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// CSV with one row per (L, trial) followed by one aggregate row per L.
    #[arg(long)]
    pub csv: PathBuf,
}

/// ```toml
/// n = 2
/// d = 0.5
/// L = [6, 8, 10, 12]
/// trials = 200
/// seed = 7   # optional, else --seed
/// B = 2      # optional: also build associated sets
/// ```
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: u32,
    pub d: f64,
    #[serde(rename = "L")]
    pub lengths: Vec<usize>,
    pub trials: u64,
    pub seed: Option<u64>,
    #[serde(rename = "B")]
    pub block_len: Option<usize>,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() {
            bail!("config: L must list at least one length");
        }
        if self.lengths.contains(&0) {
            bail!("config: lengths must be >= 1");
        }
        if self.trials == 0 {
            bail!("config: trials must be >= 1");
        }
        if !(self.d > 0.0 && self.d < 1.0) {
            bail!("config: d must lie strictly between 0 and 1, got {}", self.d);
        }
        if self.block_len == Some(0) {
            bail!("config: B must be >= 1");
        }
        Alphabet::new(self.n)?;
        if self.n > MAX_PIPELINE_GENERATORS {
            return Err(Error::Budget {
                what: "pipeline hit columns 2^n*n",
                required: format!("n = {}", self.n),
                limit: MAX_PIPELINE_GENERATORS as u64,
            }
            .into());
        }
        Ok(())
    }
}

struct TrialRow {
    relators: usize,
    distinct: usize,
    certified_scan: bool,
    certified_languages: bool,
    assoc: Option<(usize, usize)>,
    hits: Vec<bool>,
}

fn hit_column(signs: &SignVector, i: usize) -> String {
    let s: String = signs
        .signs()
        .iter()
        .map(|s| if *s == Sign::Plus { 'p' } else { 'm' })
        .collect();
    format!("hit_{s}_{i}")
}

fn run_trial(cfg: &SweepConfig, seed: u64, length: usize, trial: u64, ba: Option<&BlockAlphabet>) -> Result<TrialRow> {
    let p = sweep_presentation(cfg.n, cfg.d, length, seed, trial)?;
    let mut sorted = p.relators().to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let assoc = match ba {
        Some(ba) if length >= ba.block_len() => {
            let set = build_associated_set(&p, ba)?;
            Some((set.residue, set.words.len()))
        }
        _ => None,
    };
    Ok(TrialRow {
        relators: p.relators().len(),
        distinct: sorted.len(),
        certified_scan: certify_with_route(&p, WitnessRoute::Scan, cfg.n)?.is_certified(),
        certified_languages: certify_with_route(&p, WitnessRoute::Languages, cfg.n)?.is_certified(),
        assoc,
        hits: witness_hits(&p, WitnessRoute::Languages).into_iter().map(|h| h.2).collect(),
    })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn bit(b: bool) -> String {
    u8::from(b).to_string()
}

pub fn run(args: &PipelineArgs, mut run: Run) -> Result<Status> {
    let text = run.read(&args.config)?;
    let mut cfg: SweepConfig = toml::from_str(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    cfg.validate()?;
    let seed = cfg.seed.unwrap_or(run.seed);
    cfg.seed = Some(seed);
    let ba = cfg.block_len.map(|b| build_block_alphabet(cfg.n, b)).transpose()?;
    let n = cfg.n as usize;
    let pairs: Vec<(SignVector, usize)> = SignVector::all(n).flat_map(|s| (1..=n).map(move |i| (s.clone(), i))).collect();
    // every A_{ε,i} language has the same size at each length
    let fixed = make_sign_automaton(&SignVector::all(n).next().expect("n >= 1"), 1)?;
    let alphabet = Alphabet::new(cfg.n)?;

    let mut header: Vec<String> = [
        "kind",
        "L",
        "trial",
        "relators",
        "distinct_relators",
        "certified_scan",
        "certified_languages",
        "assoc_P",
        "assoc_size",
        "expected_hit",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(pairs.iter().map(|(s, i)| hit_column(s, *i)));

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for &length in &cfg.lengths {
        let rows: Vec<TrialRow> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(&cfg, seed, length, t, ba.as_ref()))
            .collect::<Result<_>>()?;
        for (t, r) in rows.iter().enumerate() {
            let mut rec = vec![
                "trial".to_string(),
                length.to_string(),
                t.to_string(),
                r.relators.to_string(),
                r.distinct.to_string(),
                bit(r.certified_scan),
                bit(r.certified_languages),
                opt(r.assoc.map(|a| a.0)),
                opt(r.assoc.map(|a| a.1)),
                String::new(),
            ];
            rec.extend(r.hits.iter().map(|&h| bit(h)));
            w.write_record(&rec)?;
        }
        let tf = cfg.trials as f64;
        let mean = |f: &dyn Fn(&TrialRow) -> f64| rows.iter().map(f).sum::<f64>() / tf;
        let b = rows[0].relators as u64;
        let expected = intersect_probability(&fixed.count_language_reduced(length), &count_reduced(alphabet, length), b);
        let mut rec = vec![
            "aggregate".to_string(),
            length.to_string(),
            String::new(),
            b.to_string(),
            mean(&|r| r.distinct as f64).to_string(),
            mean(&|r| f64::from(u8::from(r.certified_scan))).to_string(),
            mean(&|r| f64::from(u8::from(r.certified_languages))).to_string(),
            opt(rows[0].assoc.map(|a| a.0)),
            if rows[0].assoc.is_some() {
                mean(&|r| r.assoc.map_or(0.0, |a| a.1 as f64)).to_string()
            } else {
                String::new()
            },
            expected.to_string(),
        ];
        rec.extend((0..pairs.len()).map(|k| mean(&|r| f64::from(u8::from(r.hits[k]))).to_string()));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    run.write(&args.csv, &bytes)?;
    #[derive(Serialize)]
    struct Params<'a> {
        #[serde(flatten)]
        args: &'a PipelineArgs,
        resolved: &'a SweepConfig,
    }
    run.finish("pipeline", &Params { args, resolved: &cfg }, Status::Success)
}
