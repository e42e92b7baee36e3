use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use randgroup_core::rng::GENERATOR_NAME;

use crate::Status;

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Everything needed to rerun a command and get the same bytes. Carries no
/// timestamps or host data, so it is itself reproducible.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub json_indent: Option<usize>,
    pub version: String,
    pub generator: String,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Per-invocation state: global flags plus the files read and written.
pub struct Run {
    pub seed: u64,
    pub indent: Option<usize>,
    inputs: Vec<FileDigest>,
    outputs: Vec<(PathBuf, FileDigest)>,
}

impl Run {
    pub fn new(seed: u64, indent: Option<usize>) -> Self {
        Run {
            seed,
            indent,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileDigest::of(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push((path.to_path_buf(), FileDigest::of(path, bytes)));
        Ok(())
    }

    /// Writes `text` to `out`, or prints it when there is no file.
    pub fn emit(&mut self, out: Option<&Path>, text: &str) -> Result<()> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match out {
            Some(path) => self.write(path, text.as_bytes()),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, value: &T) -> String {
        randgroup_core::json::to_string(value, self.indent)
    }

    /// Writes `<first output>.manifest.json` when anything was written.
    pub fn finish<P: Serialize>(self, command: &str, params: &P, status: Status) -> Result<Status> {
        let Some((first, _)) = self.outputs.first() else {
            return Ok(status);
        };
        let mut path = first.clone().into_os_string();
        path.push(".manifest.json");
        let manifest = RunManifest {
            command: command.to_string(),
            params: serde_json::to_value(params)?,
            seed: self.seed,
            json_indent: self.indent,
            version: env!("CARGO_PKG_VERSION").to_string(),
            generator: GENERATOR_NAME.to_string(),
            inputs: self.inputs,
            outputs: self.outputs.into_iter().map(|(_, d)| d).collect(),
        };
        let text = randgroup_core::json::to_string(&manifest, Some(2)) + "\n";
        fs::write(&path, text).with_context(|| format!("writing {}", Path::new(&path).display()))?;
        Ok(status)
    }
}
