use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use randgroup_core::stats::{run_distinctness_experiment, run_relator_repeat_experiment};
use randgroup_core::{make_sign_automaton, run_concentration_experiment, run_intersection_experiment, HitModelParams};

use crate::parse;
use crate::run::Run;
use crate::Status;

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum StatsCommand {
    /// Distinguished-hit count of b uniform draws from c elements, a distinguished.
    Concentration(ConcentrationArgs),
    /// All-distinct frequency of b draws from c elements, or of sampled relator tuples.
    Distinct(DistinctArgs),
    /// Hits of sampled relator tuples in the language of a fixed automaton.
    Intersect(IntersectArgs),
}

#[derive(Args, Serialize)]
pub struct Outputs {
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// CSV report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON report; stdout if neither this nor --csv is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct ConcentrationArgs {
    /// Population size.
    #[arg(long)]
    pub c: u64,
    /// Distinguished elements.
    #[arg(long)]
    pub a: u64,
    /// Draws per trial.
    #[arg(long)]
    pub b: u64,
    /// Relative half-width of the window around the mean.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub outputs: Outputs,
}

#[derive(Args, Serialize)]
pub struct DistinctArgs {
    /// Draws per trial (with --c).
    #[arg(long, requires = "c", conflicts_with_all = ["n", "d", "length"])]
    pub b: Option<u64>,
    /// Population size (with --b).
    #[arg(long, requires = "b")]
    pub c: Option<u64>,
    /// Generators, for sampled relator tuples (with --d and --L).
    #[arg(long, requires_all = ["d", "length"])]
    pub n: Option<u32>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L")]
    pub length: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub outputs: Outputs,
}

#[derive(Args, Serialize)]
pub struct IntersectArgs {
    /// b-automaton JSON for the fixed set.
    #[arg(long, conflicts_with = "signs")]
    pub automaton: Option<PathBuf>,
    /// Use the sign automaton for this sign vector instead (with --i).
    #[arg(long, allow_hyphen_values = true, requires = "i")]
    pub signs: Option<String>,
    #[arg(long)]
    pub i: Option<usize>,
    /// Density.
    #[arg(long)]
    pub d: f64,
    /// Comma-separated relator lengths.
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L")]
    pub lengths: String,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub outputs: Outputs,
}

/// One CSV line. The first twelve columns are shared by all experiments;
/// cells that do not apply are left empty.
#[derive(Debug, Default, Serialize)]
struct Row {
    #[serde(rename = "L")]
    length: Option<usize>,
    #[serde(rename = "c_L")]
    c: Option<String>,
    #[serde(rename = "a_L")]
    a: Option<String>,
    #[serde(rename = "b_L")]
    b: Option<u64>,
    mean_exact: Option<f64>,
    var_exact: Option<f64>,
    cheb_bound: Option<f64>,
    empirical_in_window: Option<f64>,
    q_exact: Option<f64>,
    q_bernoulli: Option<f64>,
    hits_distinct_mean: Option<f64>,
    envelope_ratio: Option<f64>,
    trials: u64,
    empirical_mean: Option<f64>,
    empirical_variance: Option<f64>,
    empirical_tail: Option<f64>,
    empirical_all_distinct: Option<f64>,
    hits_mean: Option<f64>,
    intersect_fraction: Option<f64>,
}

fn csv_bytes(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn write_reports<T: Serialize>(run: &mut Run, outputs: &Outputs, report: &T, rows: &[Row]) -> Result<()> {
    if let Some(path) = &outputs.csv {
        run.write(path, &csv_bytes(rows)?)?;
    }
    let json = run.json(report);
    match (&outputs.out, &outputs.csv) {
        (Some(path), _) => run.emit(Some(path.as_path()), &json),
        (None, Some(_)) => Ok(()),
        (None, None) => run.emit(None::<&Path>, &json),
    }
}

pub fn run(cmd: &StatsCommand, mut run: Run) -> Result<Status> {
    let seed = run.seed;
    match cmd {
        StatsCommand::Concentration(args) => {
            let params = HitModelParams::new(args.c, args.a, args.b, args.epsilon)?;
            let rep = run_concentration_experiment(&params, args.outputs.trials, seed)?;
            let row = Row {
                c: Some(args.c.to_string()),
                a: Some(args.a.to_string()),
                b: Some(args.b),
                mean_exact: Some(rep.mean_exact),
                var_exact: Some(rep.var_exact),
                cheb_bound: Some(rep.chebyshev_bound),
                empirical_in_window: Some(rep.empirical_in_window),
                q_exact: Some(rep.q_exact),
                q_bernoulli: Some(rep.q_bernoulli),
                trials: rep.trials,
                empirical_mean: Some(rep.empirical.mean),
                empirical_variance: Some(rep.empirical.variance),
                empirical_tail: Some(rep.empirical_tail),
                empirical_all_distinct: Some(rep.empirical_all_distinct),
                ..Row::default()
            };
            write_reports(&mut run, &args.outputs, &rep, &[row])?;
            run.finish("stats concentration", cmd, Status::Success)
        }
        StatsCommand::Distinct(args) => {
            let trials = args.outputs.trials;
            let rep = match (args.b, args.c, args.n, args.d, args.length) {
                (Some(b), Some(c), None, None, None) => run_distinctness_experiment(b, c, trials, seed)?,
                (None, None, Some(n), Some(d), Some(l)) => run_relator_repeat_experiment(n, d, l, trials, seed)?,
                _ => bail!("give either --b and --c, or --n, --d and --L"),
            };
            let row = Row {
                length: args.length,
                c: Some(rep.c.clone()),
                b: Some(rep.b),
                q_exact: Some(rep.q_exact),
                q_bernoulli: Some(rep.q_bernoulli),
                trials: rep.trials,
                empirical_all_distinct: Some(rep.empirical_all_distinct),
                ..Row::default()
            };
            write_reports(&mut run, &args.outputs, &rep, &[row])?;
            run.finish("stats distinct", cmd, Status::Success)
        }
        StatsCommand::Intersect(args) => {
            let fixed = match (&args.automaton, &args.signs, args.i) {
                (Some(path), None, _) => parse::automaton(&run.read(path)?)?,
                (None, Some(signs), Some(i)) => make_sign_automaton(&parse::sign_vector(signs)?, i)?,
                _ => bail!("give either --automaton or --signs with --i"),
            };
            let lengths = parse::lengths(&args.lengths)?;
            let rep = run_intersection_experiment(&fixed, args.d, &lengths, args.outputs.trials, args.epsilon, seed)?;
            for w in &rep.warnings {
                eprintln!("warning: {w}");
            }
            let rows: Vec<Row> = rep
                .rows
                .iter()
                .map(|r| Row {
                    length: Some(r.length),
                    c: Some(r.c.clone()),
                    a: Some(r.a.clone()),
                    b: Some(r.b),
                    mean_exact: Some(r.mean_exact),
                    var_exact: Some(r.var_exact),
                    cheb_bound: Some(r.cheb_bound),
                    empirical_in_window: Some(r.empirical_in_window),
                    q_exact: Some(r.q_exact),
                    q_bernoulli: Some(r.q_bernoulli),
                    hits_distinct_mean: Some(r.hits_distinct_mean),
                    envelope_ratio: Some(r.envelope_ratio),
                    trials: r.trials,
                    hits_mean: Some(r.hits_mean),
                    intersect_fraction: Some(r.intersect_fraction),
                    ..Row::default()
                })
                .collect();
            write_reports(&mut run, &args.outputs, &rep, &rows)?;
            run.finish("stats intersect", cmd, Status::Success)
        }
    }
}
