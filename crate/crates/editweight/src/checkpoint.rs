//! Versioned JSON model checkpoints.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use editweight_core::model::{Model, ModelConfig, Vocab};
use serde::{Deserialize, Serialize};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Checkpoint {
    version: u32,
    config: ModelConfig,
    vocab: Vocab,
    params: Vec<f64>,
}

pub fn to_json(model: &Model) -> Result<String> {
    let ckpt = Checkpoint {
        version: CHECKPOINT_VERSION,
        config: model.config.clone(),
        vocab: model.vocab.clone(),
        params: model.params.clone(),
    };
    Ok(serde_json::to_string(&ckpt)?)
}

pub fn from_json(text: &str) -> Result<Model> {
    let ckpt: Checkpoint = serde_json::from_str(text).context("malformed checkpoint")?;
    if ckpt.version != CHECKPOINT_VERSION {
        bail!(
            "checkpoint version {} is not supported (expected {CHECKPOINT_VERSION})",
            ckpt.version
        );
    }
    if !ckpt.vocab.is_well_formed() {
        bail!("checkpoint vocabulary does not start with the reserved markers");
    }
    let expected = Model::new(ckpt.config.clone(), ckpt.vocab.clone())?
        .params
        .len();
    if ckpt.params.len() != expected {
        bail!(
            "checkpoint has {} parameters, its config needs {expected}",
            ckpt.params.len()
        );
    }
    Ok(Model {
        config: ckpt.config,
        vocab: ckpt.vocab,
        params: ckpt.params,
    })
}

pub fn save(model: &Model, path: &Path) -> Result<()> {
    fs::write(path, to_json(model)?).with_context(|| format!("cannot write {}", path.display()))
}

pub fn load(path: &Path) -> Result<Model> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    from_json(&text).with_context(|| format!("in {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> Model {
        let tokens = ["<pad>", "<bos>", "<eos>", "<sep>", "<unk>", "a", "b"];
        let vocab = Vocab::from_tokens(tokens.iter().map(|t| t.to_string()).collect());
        let cfg = ModelConfig {
            embedding_dim: 4,
            hidden_dim: 8,
            layer_count: 1,
            context_len: 8,
            ..ModelConfig::default()
        };
        Model::new(cfg, vocab).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        assert_eq!(from_json(&to_json(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn rejects_other_versions_and_truncated_params() {
        let m = model();
        let json = to_json(&m)
            .unwrap()
            .replacen("\"version\":1", "\"version\":9", 1);
        assert!(from_json(&json).is_err());
        let mut short = m.clone();
        short.params.pop();
        assert!(from_json(&to_json(&short).unwrap()).is_err());
    }
}
