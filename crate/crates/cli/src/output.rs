// Copyright 2026 PulseForge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Atomic output files and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Write via a sibling temporary file and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path
        .file_name()
        .with_context(|| format!("{} has no file name", path.display()))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(bytes).with_context(|| format!("writing {}", tmp.display()))?;
    f.sync_all().with_context(|| format!("syncing {}", tmp.display()))?;
    drop(f);
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

/// Everything needed to reproduce a run. Paths are relative to the
/// manifest's directory and no timestamps are recorded, so equal inputs
/// give byte-identical manifests.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    /// Input path as given on the command line → SHA-256.
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub versions: BTreeMap<String, String>,
    /// Output path → SHA-256.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        let versions = [
            ("pulseforge".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("pulseforge-core".to_string(), pulseforge_core::VERSION.to_string()),
        ]
        .into_iter()
        .collect();
        Self {
            command: command.to_string(),
            arguments: BTreeMap::new(),
            inputs: BTreeMap::new(),
            seed,
            versions,
            outputs: BTreeMap::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.arguments.insert(key.to_string(), value.to_string());
        self
    }

    /// Read an input file and record its hash.
    pub fn input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = read_input(path)?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    pub fn input_text(&mut self, path: &Path) -> Result<String> {
        let bytes = self.input(path)?;
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }
}

/// A directory of outputs plus its manifest.
pub struct OutputSet {
    root: PathBuf,
    pub manifest: RunManifest,
}

impl OutputSet {
    pub fn new(root: impl Into<PathBuf>, manifest: RunManifest) -> Self {
        Self {
            root: root.into(),
            manifest,
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.root.join(rel), bytes)?;
        self.manifest.outputs.insert(rel.to_string(), sha256_hex(bytes));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    pub fn write_csv(&mut self, rel: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().context("flushing CSV")?;
        self.write(rel, &bytes)
    }

    /// Write the manifest under `name` next to the outputs.
    pub fn finish(self, name: &str) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        write_atomic(&self.root.join(name), text.as_bytes())
    }
}

/// Output set for a single file `path`: outputs are named relative to its
/// directory and the manifest goes to `<path>.manifest.json`.
pub fn single(path: &Path, manifest: RunManifest) -> (OutputSet, String) {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")).to_path_buf();
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    (OutputSet::new(dir, manifest), name)
}

/// Float formatting for CSV cells: shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
