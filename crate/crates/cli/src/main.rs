//! `randgroup`: sampling, certification, automata, block alphabets and
//! statistics sweeps over random group presentations.
//!
//! Exit codes: 0 success or certified, 2 input error, 3 no certificate,
//! 4 budget exceeded.

mod automaton;
mod blocks;
mod certify;
mod parse;
mod pipeline;
mod run;
mod sample;
mod stats;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use run::Run;

#[derive(Parser)]
#[command(name = "randgroup", version, about = "Random group presentations and left-orderability obstructions")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: one per core). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Pretty-print JSON outputs with this many spaces; compact if absent.
    #[arg(long = "json-indent", global = true)]
    json_indent: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a relator tuple in the density model.
    Sample(sample::SampleArgs),
    /// Search for a left-orderability obstruction certificate.
    Certify(certify::CertifyArgs),
    /// Inspect b-automata.
    #[command(subcommand)]
    Automaton(automaton::AutomatonCommand),
    /// Block alphabets and associated relators.
    #[command(subcommand)]
    Blocks(blocks::BlocksCommand),
    /// Hit-count experiments.
    #[command(subcommand)]
    Stats(stats::StatsCommand),
    /// Sample, certify and count across a sweep of lengths.
    Pipeline(pipeline::PipelineArgs),
}

/// What a command reports besides plain success.
pub enum Status {
    Success,
    NoCertificate,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let budget = err
        .chain()
        .filter_map(|e| e.downcast_ref::<randgroup_core::Error>())
        .any(|e| e.is_budget());
    if budget {
        4
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let run = Run::new(cli.seed, cli.json_indent);
    let result = match &cli.command {
        Command::Sample(args) => sample::run(args, run),
        Command::Certify(args) => certify::run(args, run),
        Command::Automaton(cmd) => automaton::run(cmd, run),
        Command::Blocks(cmd) => blocks::run(cmd, run),
        Command::Stats(cmd) => stats::run(cmd, run),
        Command::Pipeline(args) => pipeline::run(args, run),
    };
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::NoCertificate) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
