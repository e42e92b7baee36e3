use std::path::PathBuf;

use anyhow::{ensure, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use randgroup_core::order::{DEFAULT_MAX_GENERATORS, VERDICT_NONE};
use randgroup_core::{certify_with_route, Certification, WitnessRoute};

use crate::parse;
use crate::run::Run;
use crate::Status;

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Any positive-cone relator using the required letter.
    Scan,
    /// A relator accepted by the sign automaton.
    Languages,
}

impl From<Route> for WitnessRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::Scan => WitnessRoute::Scan,
            Route::Languages => WitnessRoute::Languages,
        }
    }
}

#[derive(Args, Serialize)]
pub struct CertifyArgs {
    /// Presentation JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Write the certificate (or the failing pair) to this file.
    #[arg(long = "emit-witnesses")]
    pub emit_witnesses: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Route::Scan)]
    pub route: Route,
    /// Refuse presentations with more generators than this.
    #[arg(long = "max-generators", default_value_t = DEFAULT_MAX_GENERATORS)]
    pub max_generators: u32,
}

#[derive(Serialize)]
struct FailureReport {
    verdict: &'static str,
    n: u32,
    failing: Failing,
}

#[derive(Serialize)]
struct Failing {
    signs: Vec<i32>,
    i: usize,
}

pub fn run(args: &CertifyArgs, mut run: Run) -> Result<Status> {
    let text = run.read(&args.input)?;
    let p = parse::presentation(&text)?;
    let outcome = certify_with_route(&p, args.route.into(), args.max_generators)?;
    println!("{}", outcome.verdict());
    let (json, status) = match &outcome {
        Certification::Certified(cert) => {
            ensure!(cert.verify(&p), "internal error: certificate failed verification");
            (run.json(&cert.to_file()), Status::Success)
        }
        Certification::NoCertificate { signs, index } => {
            let report = FailureReport {
                verdict: VERDICT_NONE,
                n: p.alphabet().n(),
                failing: Failing {
                    signs: signs.to_i32(),
                    i: *index,
                },
            };
            (run.json(&report), Status::NoCertificate)
        }
    };
    if let Some(out) = &args.emit_witnesses {
        run.emit(Some(out), &json)?;
    }
    run.finish("certify", args, status)
}
