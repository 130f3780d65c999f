use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::output::OutputSet;

/// Record of one command execution, written next to its outputs. The
/// parameter set is complete: `replay` re-executes from it. Only
/// `duration_seconds` varies between identical runs; the data files are byte
/// identical.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub artifact_version: String,
    pub master_seed: Option<u64>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?;
        serde_json::from_str(&text).context("parsing manifest")
    }
}

/// Appends the manifest to the output set and writes everything.
pub fn finalize<P: Serialize>(
    command: &str,
    master_seed: Option<u64>,
    parameters: &P,
    mut outputs: OutputSet,
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.to_string(),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed,
        parameters: serde_json::to_value(parameters).context("serializing parameters")?,
        outputs: outputs.names(),
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let rendered = serde_json::to_string_pretty(&manifest).context("rendering manifest")?;
    outputs.add("manifest.json", rendered + "\n");
    outputs.write_all()
}
