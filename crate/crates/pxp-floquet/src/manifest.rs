//! JSON run manifest: config echo, wall time, library version, convergence
//! metrics, and a content hash per output file.

use crate::error::Result;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// One emitted file with its SHA-256 content hash.
#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Manifest written next to every command's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub library_version: String,
    /// Rendered config; parsing it reproduces the run exactly.
    pub config: String,
    pub wall_time_seconds: f64,
    /// Per-command convergence / quality metrics.
    pub convergence: serde_json::Value,
    pub outputs: Vec<OutputFile>,
    /// True when some grid cells failed and were flagged in the tables.
    pub partial: bool,
    pub flagged_cells: usize,
}

impl RunManifest {
    pub fn new(command: &str, config: String) -> Self {
        Self {
            command: command.to_string(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            wall_time_seconds: 0.0,
            convergence: serde_json::Value::Null,
            outputs: Vec::new(),
            partial: false,
            flagged_cells: 0,
        }
    }

    /// Hash and register an already-written output file.
    pub fn add_output(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.outputs.push(OutputFile {
            path: path.display().to_string(),
            bytes: bytes.len() as u64,
            sha256: hex,
        });
        Ok(())
    }

    /// Serialize to `<dir>/manifest.json`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self)
            .expect("manifest serialization cannot fail");
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

/// SHA-256 hex digest of a byte slice.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
