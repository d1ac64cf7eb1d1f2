//! Desk-scale sequence-to-sequence model trained with weighted cross entropy.

pub mod config;
pub mod loss;
pub mod sample;
pub mod synthetic;
pub mod train;
pub mod transformer;
pub mod vocab;

pub use config::{GenConfig, ModelConfig, Optimizer, TrainConfig, Weighting};
pub use loss::{weighted_ce_loss, weighted_ce_loss_and_grad, LossWeights};
pub use sample::{generate, repeated_sample, Critic, MetricCritic};
pub use synthetic::{make_synthetic_corpus, SynthRules};
pub use train::{
    batch_loss, batch_loss_and_grad, fit, grad_check, train, train_with_weights, Example,
    LossCurve, Model, TrainOutcome,
};
pub use vocab::Vocab;
