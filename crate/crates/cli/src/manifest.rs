use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub precision_bits: u32,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(
        subcommand: String,
        args: Vec<String>,
        seed: u64,
        precision_bits: u32,
    ) -> RunManifest {
        RunManifest {
            subcommand,
            args,
            inputs: Vec::new(),
            seed,
            precision_bits,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Reads an input file, recording a digest of every byte.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            bytes: bytes.len(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn read_json(&mut self, path: &Path) -> Result<serde_json::Value> {
        let text = self.read(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Where the manifest goes: the explicit path, or next to the output file.
    pub fn target(explicit: Option<&PathBuf>, out: Option<&PathBuf>) -> Option<PathBuf> {
        explicit.cloned().or_else(|| {
            out.map(|o| {
                let mut s = o.clone().into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            })
        })
    }
}
