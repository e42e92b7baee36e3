use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::json;

use randgroup_core::{estimate_growth, make_sign_automaton, BAutomaton};

use crate::parse;
use crate::run::Run;
use crate::Status;

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum AutomatonCommand {
    /// Count language words of each length (all words and reduced ones).
    Count(CountArgs),
    /// Test whether a word is accepted.
    Accepts(AcceptsArgs),
    /// Test λ-largeness and report the implied lower bounds.
    Largeness(LargenessArgs),
    /// Write the sign automaton for a sign vector and an index.
    Sign(SignArgs),
    /// Growth rate and density estimate from exact counts.
    Growth(GrowthArgs),
}

#[derive(Args, Serialize)]
pub struct Io {
    /// b-automaton JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    /// Largest length; every length from 1 is reported.
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L")]
    pub length: usize,
}

#[derive(Args, Serialize)]
pub struct AcceptsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    /// `"a1 A2"` or `[1,-2]`.
    #[arg(long)]
    pub word: String,
}

#[derive(Args, Serialize)]
pub struct LargenessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    /// `p/q` or a decimal.
    #[arg(long)]
    pub lambda: String,
    /// Also report the word-count lower bounds at this length.
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L")]
    pub length: Option<usize>,
}

#[derive(Args, Serialize)]
pub struct SignArgs {
    /// Sign vector, e.g. `+,-` or `1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: String,
    /// Index of the required letter, 1-based.
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct GrowthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub io: Io,
    #[arg(long = "min-L", default_value_t = 1)]
    #[serde(rename = "min_L")]
    pub min_length: usize,
    #[arg(long = "max-L")]
    #[serde(rename = "max_L")]
    pub max_length: usize,
    /// Count reduced words only.
    #[arg(long)]
    pub reduced: bool,
}

fn load(io: &Io, run: &mut Run) -> Result<BAutomaton> {
    let text = run.read(&io.input)?;
    parse::automaton(&text)
}

pub fn run(cmd: &AutomatonCommand, mut run: Run) -> Result<Status> {
    let (name, value, out) = match cmd {
        AutomatonCommand::Count(args) => {
            let a = load(&args.io, &mut run)?;
            let words = a.count_upto(args.length, false);
            let reduced = a.count_upto(args.length, true);
            let rows: Vec<_> = (1..=args.length)
                .map(|l| json!({"L": l, "words": words[l].to_string(), "reduced": reduced[l].to_string()}))
                .collect();
            ("automaton count", json!({"n": a.alphabet().n(), "counts": rows}), &args.io.out)
        }
        AutomatonCommand::Accepts(args) => {
            let a = load(&args.io, &mut run)?;
            let w = parse::word(&args.word)?;
            a.alphabet().check_word(&w)?;
            let value = json!({"word": w, "accepts": a.accepts(&w)});
            ("automaton accepts", value, &args.io.out)
        }
        AutomatonCommand::Largeness(args) => {
            let a = load(&args.io, &mut run)?;
            let lambda = parse::lambda(&args.lambda)?;
            let two_n = a.alphabet().letter_count() as u64;
            let threshold = (lambda * two_n).ceil().to_integer();
            let large = a.is_lambda_large(lambda);
            let mut value = json!({
                "lambda": lambda.to_string(),
                "large": large,
                "initial_size": a.initial().len(),
                "min_follow_size": a.min_follow_size(),
                "threshold": threshold,
            });
            if let Some(l) = args.length.filter(|&l| l >= 1) {
                let lower = num_bigint::BigUint::from(threshold).pow(l as u32 - 1);
                let lower_reduced = num_bigint::BigUint::from(threshold.saturating_sub(1)).pow(l as u32 - 1);
                value["L"] = json!(l);
                value["words"] = json!(a.count_language_words(l).to_string());
                value["reduced"] = json!(a.count_language_reduced(l).to_string());
                value["words_lower_bound"] = json!(large.then(|| lower.to_string()));
                value["reduced_lower_bound"] = json!(large.then(|| lower_reduced.to_string()));
            }
            ("automaton largeness", value, &args.io.out)
        }
        AutomatonCommand::Sign(args) => {
            let signs = parse::sign_vector(&args.signs)?;
            let a = make_sign_automaton(&signs, args.i)?;
            run.emit(args.out.as_deref(), &a.to_json(run.indent))?;
            return run.finish("automaton sign", cmd, Status::Success);
        }
        AutomatonCommand::Growth(args) => {
            let a = load(&args.io, &mut run)?;
            let g = estimate_growth(&a, args.min_length, args.max_length, args.reduced)?;
            let basis: Vec<_> = g
                .count_basis
                .iter()
                .map(|(l, c)| json!({"L": l, "count": c.to_string()}))
                .collect();
            let value = json!({
                "growth_rate_lower": g.growth_rate_lower,
                "density_lower": g.density_lower,
                "constant": g.constant,
                "ratio_lengths": [g.ratio_lengths.0, g.ratio_lengths.1],
                "reduced": g.reduced,
                "degenerate": g.degenerate,
                "count_basis": basis,
            });
            ("automaton growth", value, &args.io.out)
        }
    };
    let text = run.json(&value);
    run.emit(out.as_deref(), &text)?;
    run.finish(name, cmd, Status::Success)
}
