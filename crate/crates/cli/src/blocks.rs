use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Subcommand};
use serde::Serialize;

use randgroup_core::blocks::{AssociatedSetFile, BlockAlphabetInfo, PARTITION_RULE};
use randgroup_core::{
    associate_word, build_associated_set, build_block_alphabet, pair_relators, BlockAlphabet, BlockWord, LengthClass, Presentation,
};

use crate::parse;
use crate::run::Run;
use crate::Status;

#[derive(Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum BlocksCommand {
    /// Associated word of every relator, in tuple order (needs B | L).
    Associate(BlocksArgs),
    /// Glued word of every matching ordered pair of relators (needs L = P mod B, P > 0).
    Pair(BlocksArgs),
    /// The associated set: distinct associated or glued words, sorted.
    Build(BlocksArgs),
}

#[derive(Args, Serialize)]
pub struct BlocksArgs {
    /// Block length.
    #[arg(long = "B")]
    #[serde(rename = "B")]
    pub block_len: usize,
    /// Residue of L modulo B; inferred from the relators if absent.
    #[arg(long = "P")]
    #[serde(rename = "P")]
    pub residue: Option<usize>,
    /// Presentation JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PairedFile {
    #[serde(flatten)]
    file: AssociatedSetFile,
    /// `[j, k]` tuple indices of `(r1, r2)` for each glued word.
    pairs: Vec<[usize; 2]>,
}

fn residue_of(p: &Presentation, args: &BlocksArgs) -> Result<(usize, usize)> {
    let length = p
        .relator_length()
        .or_else(|| p.provenance().map(|c| c.length))
        .ok_or_else(|| anyhow!("relators must share one length"))?;
    let class = LengthClass::of_length(args.block_len, length)?;
    if let Some(r) = args.residue {
        if r != class.residue {
            bail!("relator length {length} has residue {} mod {}, not {r}", class.residue, args.block_len);
        }
    }
    Ok((length, class.residue))
}

fn file_for(p: &Presentation, ba: &BlockAlphabet, residue: usize, hat_len: usize, relators: Vec<BlockWord>) -> AssociatedSetFile {
    AssociatedSetFile {
        n: ba.n_hat(),
        length: Some(hat_len),
        d: p.provenance().map(|c| c.d),
        seed: p.provenance().map(|c| c.seed),
        relators,
        block_alphabet: BlockAlphabetInfo {
            n: ba.base().n(),
            block_len: ba.block_len(),
            residue,
            partition_rule: PARTITION_RULE.to_string(),
        },
    }
}

pub fn run(cmd: &BlocksCommand, mut run: Run) -> Result<Status> {
    let (name, args) = match cmd {
        BlocksCommand::Associate(a) => ("blocks associate", a),
        BlocksCommand::Pair(a) => ("blocks pair", a),
        BlocksCommand::Build(a) => ("blocks build", a),
    };
    let text = run.read(&args.input)?;
    let p = parse::presentation(&text)?;
    let ba = build_block_alphabet(p.alphabet().n(), args.block_len)?;
    let json = match cmd {
        BlocksCommand::Associate(_) => {
            let (length, residue) = residue_of(&p, args)?;
            if residue != 0 {
                bail!("associate needs B | L; L = {length}, B = {}", args.block_len);
            }
            let words = p.relators().iter().map(|r| associate_word(r, &ba)).collect::<Result<Vec<_>, _>>()?;
            run.json(&file_for(&p, &ba, 0, length / args.block_len, words))
        }
        BlocksCommand::Pair(_) => {
            let (length, residue) = residue_of(&p, args)?;
            if residue == 0 {
                bail!("pair needs L not divisible by B; L = {length}, B = {}", args.block_len);
            }
            let mut words = Vec::new();
            let mut pairs = Vec::new();
            for (j, r1) in p.relators().iter().enumerate() {
                for (k, r2) in p.relators().iter().enumerate() {
                    if let Some(w) = pair_relators(r1, r2, &ba, residue)? {
                        words.push(w);
                        pairs.push([j, k]);
                    }
                }
            }
            let hat_len = 2 * (length - residue) / args.block_len;
            run.json(&PairedFile {
                file: file_for(&p, &ba, residue, hat_len, words),
                pairs,
            })
        }
        BlocksCommand::Build(_) => {
            residue_of(&p, args)?;
            run.json(&build_associated_set(&p, &ba)?.to_file())
        }
    };
    run.emit(args.out.as_deref(), &json)?;
    run.finish(name, cmd, Status::Success)
}
