//! Run manifests: everything needed to repeat a run, and nothing that
//! changes between identical runs (no timestamps, no paths).

use std::path::Path;

use anyhow::{Context, Result};
use editweight_core::model::{GenConfig, ModelConfig, TrainConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SOFTWARE: &str = concat!("editweight ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: String,
    pub command: String,
    pub seed: u64,
    pub corpus_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<TrainConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenConfig>,
    /// Candidates per source and their temperatures, for repeated sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<(usize, Vec<f64>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_sha256: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, corpus_sha256: String) -> Self {
        RunManifest {
            software: SOFTWARE.to_string(),
            command: command.to_string(),
            seed,
            corpus_sha256,
            model: None,
            train: None,
            generation: None,
            repeat: None,
            weights_sha256: None,
            checkpoint_sha256: None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}
