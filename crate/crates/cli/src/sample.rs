use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use randgroup_core::{sample_relator_set, SamplerConfig};

use crate::run::Run;
use crate::Status;

#[derive(Args, Serialize)]
pub struct SampleArgs {
    /// Number of generators.
    #[arg(long)]
    pub n: u32,
    /// Density, strictly between 0 and 1.
    #[arg(long)]
    pub d: f64,
    /// Relator length.
    #[arg(long = "L", value_name = "L")]
    #[serde(rename = "L")]
    pub length: usize,
    /// Number of relators instead of floor((2n-1)^(dL)).
    #[arg(long)]
    pub count: Option<u64>,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &SampleArgs, mut run: Run) -> Result<Status> {
    let mut config = SamplerConfig::new(args.n, args.d, args.length, run.seed);
    if let Some(count) = args.count {
        config = config.with_count(count);
    }
    let p = sample_relator_set(&config)?;
    let text = p.to_json(run.indent);
    run.emit(args.out.as_deref(), &text)?;
    run.finish("sample", args, Status::Success)
}
