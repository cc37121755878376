use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dbmc::config::ScenarioConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::CliError;

#[derive(Debug, Serialize)]
pub struct ConfigRecord {
    /// File path or `preset:NAME`.
    pub source: String,
    /// Config snapshot in SI units; parsing it reproduces the run.
    pub toml: String,
    pub resolved: ScenarioConfig,
    pub light_time_s: f64,
    pub enzyme_concentration_per_m3: f64,
    pub master_seed: u64,
}

impl ConfigRecord {
    pub fn new(source: String, config: &ScenarioConfig) -> Self {
        ConfigRecord {
            source,
            toml: config.to_toml_string(),
            resolved: config.clone(),
            light_time_s: config.light_time(),
            enzyme_concentration_per_m3: config.enzyme_concentration(),
            master_seed: config.simulation.master_seed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub configs: Vec<ConfigRecord>,
    pub outputs: Vec<OutputRecord>,
    pub timings_s: BTreeMap<String, f64>,
}

/// Output directory that records a checksum for every file written.
pub struct OutputDir {
    root: PathBuf,
    manifest: RunManifest,
}

impl OutputDir {
    pub fn create(root: &Path, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            manifest: RunManifest {
                tool: "dbmc",
                version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                configs: Vec::new(),
                outputs: Vec::new(),
                timings_s: BTreeMap::new(),
            },
        })
    }

    pub fn record_config(&mut self, record: ConfigRecord) {
        self.manifest.configs.push(record);
    }

    pub fn record_timing(&mut self, phase: &str, seconds: f64) {
        self.manifest.timings_s.insert(phase.to_string(), seconds);
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.manifest.outputs.push(OutputRecord {
            file: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(path)
    }

    /// Render with `render` into memory, then write.
    pub fn write_with(
        &mut self,
        name: &str,
        render: impl FnOnce(&mut Vec<u8>) -> dbmc::Result<()>,
    ) -> Result<PathBuf, CliError> {
        let mut buf = Vec::new();
        render(&mut buf)?;
        self.write(name, &buf)
    }

    pub fn finish(self) -> Result<PathBuf, CliError> {
        let path = self.root.join("manifest.json");
        let json = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
