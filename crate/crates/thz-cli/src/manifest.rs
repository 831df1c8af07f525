use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::io::atomic_write;

/// Record of one invocation, written next to every output file. The
/// `resolved_args` vector is a complete argv (defaults spelled out), so
/// feeding it back to the binary reproduces the run's outputs exactly;
/// only the timestamp differs.
#[derive(Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub timestamp: String,
    pub seed: Option<u64>,
    pub parameters: Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub resolved_args: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        parameters: Value,
        inputs: &[&Path],
        outputs: &[&Path],
        resolved_args: Vec<String>,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            seed,
            parameters,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            resolved_args,
        }
    }

    /// Write to the manifest path derived from `primary_output`.
    pub fn write_alongside(&self, primary_output: &Path) -> Result<()> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| crate::error::CliError::Data(e.to_string()))?;
        text.push('\n');
        atomic_write(&manifest_path(primary_output), text.as_bytes())
    }
}

/// `run.csv` gets its manifest at `run.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest.json")
}
