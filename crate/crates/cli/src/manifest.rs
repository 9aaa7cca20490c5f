use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

/// Provenance record written next to a command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub workers: usize,
    pub inputs: Vec<InputHash>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

/// Tracks inputs read and files written during one invocation.
pub struct Run {
    pub workers: usize,
    pub seed: Option<u64>,
    inputs: Vec<InputHash>,
    outputs: Vec<PathBuf>,
    started: Instant,
    manifest_override: Option<PathBuf>,
}

impl Run {
    pub fn new(workers: usize, manifest_override: Option<PathBuf>) -> Self {
        Self {
            workers,
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
            manifest_override,
        }
    }

    /// Reads an input file and records its hash.
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn emit(&mut self, path: Option<&Path>, content: &str) -> Result<()> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
                self.outputs.push(p.to_path_buf());
            }
            None => print!("{content}"),
        }
        Ok(())
    }

    /// Writes the manifest to the override path, or to `default` if any file
    /// output was produced.
    pub fn finish(self, default: Option<PathBuf>) -> Result<()> {
        let target = match (self.manifest_override.clone(), default) {
            (Some(p), _) => p,
            (None, Some(p)) if !self.outputs.is_empty() => p,
            (None, _) => match self.outputs.first() {
                Some(first) => sibling_manifest(first),
                None => return Ok(()),
            },
        };
        let manifest = RunManifest {
            command_line: std::env::args().collect(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            workers: self.workers,
            inputs: self.inputs,
            outputs: self
                .outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&target, text).with_context(|| format!("writing {}", target.display()))?;
        Ok(())
    }
}

/// `out.json` -> `out.json.manifest.json`.
pub fn sibling_manifest(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}
