use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::weights::SentenceWeightFn;
pub use crate::weights::Weighting;
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub embedding_dim: usize,
    pub hidden_dim: usize,
    pub layer_count: usize,
    pub head_count: usize,
    pub context_len: usize,
    pub vocab_cap: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            embedding_dim: 32,
            hidden_dim: 64,
            layer_count: 2,
            head_count: 2,
            context_len: 64,
            vocab_cap: 4096,
            seed: 0,
        }
    }
}

impl ModelConfig {
    /// One-layer model sized for the synthetic corpus; trains in seconds.
    pub fn desk() -> Self {
        ModelConfig {
            embedding_dim: 32,
            hidden_dim: 64,
            layer_count: 1,
            head_count: 2,
            context_len: 32,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        for (field, value) in [
            ("embedding_dim", self.embedding_dim),
            ("hidden_dim", self.hidden_dim),
            ("layer_count", self.layer_count),
            ("head_count", self.head_count),
            ("context_len", self.context_len),
        ] {
            if value == 0 {
                return Err(Error::Config {
                    field,
                    reason: "must be positive".to_string(),
                });
            }
        }
        if !self.embedding_dim.is_multiple_of(self.head_count) {
            return Err(Error::Config {
                field: "head_count",
                reason: format!("must divide embedding_dim {}", self.embedding_dim),
            });
        }
        if self.vocab_cap < 6 {
            return Err(Error::Config {
                field: "vocab_cap",
                reason: "must leave room for at least one word besides the 5 reserved ids"
                    .to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Optimizer {
    /// `v = momentum * v + g; p -= lr * v`. Momentum 0 is plain gradient descent.
    Sgd {
        momentum: f64,
    },
    Adam {
        beta1: f64,
        beta2: f64,
        eps: f64,
    },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Sgd { momentum: 0.0 }
    }
}

impl Optimizer {
    pub fn adam() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub weighting: Weighting,
    pub lambda: f64,
    pub sentence_fn: SentenceWeightFn,
    pub optimizer: Optimizer,
    /// Clip the global gradient norm to this value when set.
    pub clip_norm: Option<f64>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 5e-5,
            batch_size: 32,
            epochs: 3,
            weighting: Weighting::None,
            lambda: 1.0,
            sentence_fn: SentenceWeightFn::default(),
            optimizer: Optimizer::default(),
            clip_norm: None,
            seed: 0,
        }
    }
}

impl TrainConfig {
    /// Adam at a learning rate large enough to fit the synthetic corpus in
    /// ten epochs. The default plain descent at 5e-5 barely moves a model
    /// this small.
    pub fn desk() -> Self {
        TrainConfig {
            learning_rate: 3e-3,
            batch_size: 16,
            epochs: 10,
            optimizer: Optimizer::adam(),
            clip_norm: Some(1.0),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config {
                field: "learning_rate",
                reason: format!("must be positive, got {}", self.learning_rate),
            });
        }
        if self.batch_size == 0 {
            return Err(Error::Config {
                field: "batch_size",
                reason: "must be positive".to_string(),
            });
        }
        if self.epochs == 0 {
            return Err(Error::Config {
                field: "epochs",
                reason: "must be positive".to_string(),
            });
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config {
                field: "lambda",
                reason: format!("must be non-negative, got {}", self.lambda),
            });
        }
        let f = &self.sentence_fn;
        SentenceWeightFn::new(f.shape(), f.mean_distance(), f.offset())?;
        if let Some(c) = self.clip_norm {
            if c.is_nan() || c <= 0.0 {
                return Err(Error::Config {
                    field: "clip_norm",
                    reason: format!("must be positive, got {c}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub temperature: f64,
    pub top_p: f64,
    pub max_new_tokens: usize,
    /// Argmax decoding, the zero-temperature limit.
    pub greedy: bool,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            temperature: 0.6,
            top_p: 0.7,
            max_new_tokens: 128,
            greedy: false,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::Config {
                field: "temperature",
                reason: format!("must be positive, got {}", self.temperature),
            });
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(Error::Config {
                field: "top_p",
                reason: format!("must lie in (0, 1], got {}", self.top_p),
            });
        }
        Ok(())
    }
}

/// Ten temperatures from 0.1 to 1.0 for repeated sampling.
pub fn default_repeat_temperatures() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}
