//! Training with weighted cross entropy.
//!
//! Each pair becomes `<bos> source <sep> target <eos>`. Only positions that
//! predict a target token or the closing `<eos>` carry loss; their weights
//! come from [`PairWeights`]. A batch gradient is the weighted loss summed
//! over the batch and divided by the number of target positions, which does
//! not depend on the weights, so scaling all weights scales the gradient.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ModelConfig, Optimizer, TrainConfig};
use super::loss::{weighted_ce_loss_and_grad, LossWeights};
use super::transformer::{backward, forward, Layout};
use super::vocab::{Vocab, BOS, EOS, SEP};
use crate::text::Corpus;
use crate::weights::{pair_weights, PairWeights, Weighting};
use crate::Error;

/// Configuration, vocabulary and flat parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub config: ModelConfig,
    pub vocab: Vocab,
    pub params: Vec<f64>,
}

impl Model {
    pub fn new(config: ModelConfig, vocab: Vocab) -> Result<Self, Error> {
        config.validate()?;
        let params = Layout::new(&config, vocab.len()).init(config.seed);
        Ok(Model {
            config,
            vocab,
            params,
        })
    }

    pub fn layout(&self) -> Layout {
        Layout::new(&self.config, self.vocab.len())
    }

    /// Logits for every position of `ids`, row-major `ids.len() × vocab`.
    pub fn logits(&self, ids: &[usize]) -> Vec<f64> {
        forward(&self.layout(), &self.params, ids).logits
    }
}

/// One training sequence: model inputs, next-token targets and per-position
/// loss weights (zero over the source prefix).
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub inputs: Vec<usize>,
    pub targets: Vec<usize>,
    pub weights: Vec<f64>,
}

impl Example {
    pub fn encode(
        vocab: &Vocab,
        source: &str,
        target: &str,
        weights: &PairWeights,
    ) -> Result<Self, Error> {
        let src = vocab.encode(source);
        let tgt = vocab.encode(target);
        if weights.tokens.len() != tgt.len() {
            return Err(Error::LengthMismatch {
                expected: tgt.len(),
                actual: weights.tokens.len(),
            });
        }
        let mut ids = Vec::with_capacity(src.len() + tgt.len() + 3);
        ids.push(BOS);
        ids.extend_from_slice(&src);
        ids.push(SEP);
        ids.extend_from_slice(&tgt);
        ids.push(EOS);
        let inputs = ids[..ids.len() - 1].to_vec();
        let targets = ids[1..].to_vec();
        let mut w = vec![0.0; targets.len()];
        let start = src.len() + 1;
        for (k, tw) in weights.tokens.iter().enumerate() {
            w[start + k] = weights.sentence * tw;
        }
        w[start + tgt.len()] = weights.sentence;
        Ok(Example {
            inputs,
            targets,
            weights: w,
        })
    }

    /// Number of positions that predict target tokens (including `<eos>`).
    pub fn target_positions(&self) -> usize {
        let start = self.inputs.iter().position(|&id| id == SEP).unwrap_or(0);
        self.targets.len() - start
    }
}

/// Weighted loss summed over `batch`, and its gradient, both divided by the
/// total number of target positions.
pub fn batch_loss_and_grad(model: &Model, batch: &[Example]) -> Result<(f64, Vec<f64>), Error> {
    let layout = model.layout();
    let mut grad = vec![0.0; model.params.len()];
    let (total, count) = accumulate(&layout, &model.params, batch, &mut grad)?;
    let norm = 1.0 / count.max(1) as f64;
    grad.iter_mut().for_each(|g| *g *= norm);
    Ok((total * norm, grad))
}

/// Same normalized loss without gradients.
pub fn batch_loss(model: &Model, batch: &[Example]) -> Result<f64, Error> {
    let layout = model.layout();
    loss_only(&layout, &model.params, batch)
}

fn loss_only(layout: &Layout, params: &[f64], batch: &[Example]) -> Result<f64, Error> {
    let mut total = 0.0;
    let mut count = 0;
    for ex in batch {
        let cache = forward(layout, params, &ex.inputs);
        let (loss, _) = weighted_ce_loss_and_grad(
            &cache.logits,
            layout.vocab,
            &ex.targets,
            LossWeights::PerToken(&ex.weights),
        )?;
        total += loss;
        count += ex.target_positions();
    }
    Ok(total / count.max(1) as f64)
}

fn accumulate(
    layout: &Layout,
    params: &[f64],
    batch: &[Example],
    grad: &mut [f64],
) -> Result<(f64, usize), Error> {
    let mut total = 0.0;
    let mut count = 0;
    for ex in batch {
        let cache = forward(layout, params, &ex.inputs);
        let (loss, dlogits) = weighted_ce_loss_and_grad(
            &cache.logits,
            layout.vocab,
            &ex.targets,
            LossWeights::PerToken(&ex.weights),
        )?;
        backward(layout, params, &cache, &dlogits, grad);
        total += loss;
        count += ex.target_positions();
    }
    Ok((total, count))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossCurve {
    /// Normalized batch loss after every optimizer step.
    pub steps: Vec<f64>,
    /// Mean of the step losses of each epoch.
    pub epochs: Vec<f64>,
}

struct OptimState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

fn apply_update(params: &mut [f64], grad: &mut [f64], state: &mut OptimState, tcfg: &TrainConfig) {
    if let Some(max_norm) = tcfg.clip_norm {
        let norm = libm::sqrt(grad.iter().map(|g| g * g).sum::<f64>());
        if norm > max_norm {
            let s = max_norm / norm;
            grad.iter_mut().for_each(|g| *g *= s);
        }
    }
    let lr = tcfg.learning_rate;
    match tcfg.optimizer {
        Optimizer::Sgd { momentum } => {
            for ((p, g), v) in params.iter_mut().zip(grad.iter()).zip(state.v.iter_mut()) {
                *v = momentum * *v + g;
                *p -= lr * *v;
            }
        }
        Optimizer::Adam { beta1, beta2, eps } => {
            state.t += 1;
            let bc1 = 1.0 - libm::pow(beta1, state.t as f64);
            let bc2 = 1.0 - libm::pow(beta2, state.t as f64);
            for (((p, &g), m), v) in params
                .iter_mut()
                .zip(grad.iter())
                .zip(state.m.iter_mut())
                .zip(state.v.iter_mut())
            {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *p -= lr * m_hat / (libm::sqrt(v_hat) + eps);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: Model,
    pub curve: LossCurve,
}

/// Derives pair weights from `tcfg.weighting` and trains.
pub fn train(
    corpus: &Corpus,
    mcfg: &ModelConfig,
    tcfg: &TrainConfig,
) -> Result<TrainOutcome, Error> {
    tcfg.validate()?;
    if tcfg.weighting == Weighting::External {
        return Err(Error::Config {
            field: "weighting",
            reason: "external weighting needs train_with_weights".into(),
        });
    }
    let weights = corpus
        .iter()
        .map(|p| pair_weights(p, tcfg.weighting, tcfg.lambda, &tcfg.sentence_fn))
        .collect::<Result<Vec<_>, _>>()?;
    train_with_weights(corpus, &weights, mcfg, tcfg)
}

/// Trains with caller-supplied weights, one entry per pair in corpus order.
pub fn train_with_weights(
    corpus: &Corpus,
    weights: &[PairWeights],
    mcfg: &ModelConfig,
    tcfg: &TrainConfig,
) -> Result<TrainOutcome, Error> {
    tcfg.validate()?;
    mcfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if weights.len() != corpus.len() {
        return Err(Error::LengthMismatch {
            expected: corpus.len(),
            actual: weights.len(),
        });
    }
    let vocab = Vocab::build(corpus, mcfg.vocab_cap);
    let mut model = Model::new(mcfg.clone(), vocab)?;
    let examples = corpus
        .iter()
        .zip(weights)
        .map(|(pair, w)| Example::encode(&model.vocab, &pair.source, pair.first_reference(), w))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(longest) = examples.iter().map(|e| e.inputs.len()).max() {
        if longest > mcfg.context_len {
            return Err(Error::ContextOverflow {
                len: longest,
                context: mcfg.context_len,
            });
        }
    }
    let curve = fit(&mut model, &examples, tcfg)?;
    Ok(TrainOutcome { model, curve })
}

/// Runs the optimizer over `examples` in place.
pub fn fit(
    model: &mut Model,
    examples: &[Example],
    tcfg: &TrainConfig,
) -> Result<LossCurve, Error> {
    let layout = model.layout();
    let n = model.params.len();
    let mut state = OptimState {
        m: vec![0.0; n],
        v: vec![0.0; n],
        t: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(tcfg.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut curve = LossCurve::default();
    let mut grad = vec![0.0; n];
    let mut batch: Vec<Example> = Vec::with_capacity(tcfg.batch_size);
    for _ in 0..tcfg.epochs {
        order.shuffle(&mut rng);
        let mut epoch_total = 0.0;
        let mut epoch_steps = 0;
        for chunk in order.chunks(tcfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| examples[i].clone()));
            grad.iter_mut().for_each(|g| *g = 0.0);
            let (total, count) = accumulate(&layout, &model.params, &batch, &mut grad)?;
            let norm = 1.0 / count.max(1) as f64;
            let loss = total * norm;
            if !loss.is_finite() {
                return Err(Error::Diverged {
                    step: curve.steps.len(),
                });
            }
            grad.iter_mut().for_each(|g| *g *= norm);
            apply_update(&mut model.params, &mut grad, &mut state, tcfg);
            curve.steps.push(loss);
            epoch_total += loss;
            epoch_steps += 1;
        }
        curve.epochs.push(epoch_total / epoch_steps.max(1) as f64);
    }
    Ok(curve)
}

/// Central finite differences on `samples` randomly chosen parameters versus
/// the analytic gradient of [`batch_loss_and_grad`]. Returns the largest
/// relative error `|a - n| / max(|a| + |n|, floor)`.
pub fn grad_check(
    model: &Model,
    batch: &[Example],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<f64, Error> {
    // Central differences at eps = 1e-5 carry ~1e-10 of roundoff, so
    // gradients far below the floor are effectively compared absolutely.
    const FLOOR: f64 = 1e-6;
    let (loss, analytic) = batch_loss_and_grad(model, batch)?;
    if !loss.is_finite() {
        return Err(Error::Diverged { step: 0 });
    }
    let layout = model.layout();
    let mut params = model.params.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let i = rng.gen_range(0..params.len());
        let orig = params[i];
        params[i] = orig + eps;
        let plus = loss_only(&layout, &params, batch)?;
        params[i] = orig - eps;
        let minus = loss_only(&layout, &params, batch)?;
        params[i] = orig;
        if !(plus.is_finite() && minus.is_finite()) {
            return Err(Error::Diverged { step: 0 });
        }
        let numeric = (plus - minus) / (2.0 * eps);
        let a = analytic[i];
        let rel = libm::fabs(a - numeric) / (libm::fabs(a) + libm::fabs(numeric)).max(FLOOR);
        worst = worst.max(rel);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::AlignedPair;
    use alloc::string::String;

    fn tiny() -> (Corpus, ModelConfig) {
        let corpus = Corpus::new(vec![
            AlignedPair::new(
                "1",
                "the physician helped",
                vec![String::from("the doctor helped")],
            ),
            AlignedPair::new("2", "a b c", vec![String::from("a x c d")]),
        ])
        .unwrap();
        let cfg = ModelConfig {
            embedding_dim: 8,
            hidden_dim: 12,
            layer_count: 2,
            head_count: 2,
            context_len: 12,
            vocab_cap: 64,
            seed: 1,
        };
        (corpus, cfg)
    }

    #[test]
    fn encode_places_weights_on_target_positions() {
        let (corpus, cfg) = tiny();
        let model = Model::new(cfg, Vocab::build(&corpus, 64)).unwrap();
        let pair = &corpus.pairs()[1];
        let w = pair_weights(pair, Weighting::Token, 3.0, &Default::default()).unwrap();
        let ex = Example::encode(&model.vocab, &pair.source, pair.first_reference(), &w).unwrap();
        // <bos> a b c <sep> a x c d -> targets a b c <sep> a x c d <eos>
        assert_eq!(
            ex.weights,
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 3.0, 1.0, 3.0, 1.0]
        );
        assert_eq!(ex.target_positions(), 5);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let (corpus, cfg) = tiny();
        let model = Model::new(cfg, Vocab::build(&corpus, 64)).unwrap();
        let examples: Vec<Example> = corpus
            .iter()
            .map(|p| {
                let w = pair_weights(p, Weighting::Token, 2.5, &Default::default()).unwrap();
                Example::encode(&model.vocab, &p.source, p.first_reference(), &w).unwrap()
            })
            .collect();
        let err = grad_check(&model, &examples, 1e-5, 200, 7).unwrap();
        assert!(err < 1e-4, "relative error {err}");
    }

    #[test]
    fn external_weighting_needs_weights() {
        let (corpus, cfg) = tiny();
        let tcfg = TrainConfig {
            weighting: Weighting::External,
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(&corpus, &cfg, &tcfg),
            Err(Error::Config { .. })
        ));
    }

    #[test]
    fn context_overflow_reported() {
        let (corpus, mut cfg) = tiny();
        cfg.context_len = 4;
        assert!(matches!(
            train(&corpus, &cfg, &TrainConfig::default()),
            Err(Error::ContextOverflow { .. })
        ));
    }
}
