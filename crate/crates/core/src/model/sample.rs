//! Decoding: temperature + nucleus sampling, greedy decoding, and repeated
//! sampling with a critic.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::GenConfig;
use super::train::Model;
use super::vocab::{Vocab, BOS, EOS, PAD, SEP};
use crate::metrics::{difficult_words, fkgl, EasyWordList};
use crate::text::{count_words, detokenize};

/// Candidate tokens and renormalized probabilities after temperature scaling
/// and top-p truncation, most probable first (ties by lower id). The kept set
/// is the shortest prefix whose mass reaches `top_p`.
pub fn nucleus(logits: &[f64], temperature: f64, top_p: f64) -> Vec<(usize, f64)> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<(usize, f64)> = logits
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            (
                i,
                if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    libm::exp((l - max) / temperature)
                },
            )
        })
        .collect();
    let z: f64 = probs.iter().map(|p| p.1).sum();
    probs.iter_mut().for_each(|p| p.1 /= z);
    probs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut cum = 0.0;
    let mut keep = 0;
    for (_, p) in &probs {
        cum += p;
        keep += 1;
        if cum >= top_p {
            break;
        }
    }
    probs.truncate(keep);
    probs.retain(|p| p.1 > 0.0);
    let kept: f64 = probs.iter().map(|p| p.1).sum();
    probs.iter_mut().for_each(|p| p.1 /= kept);
    probs
}

pub fn sample_from_logits<R: Rng>(
    logits: &[f64],
    temperature: f64,
    top_p: f64,
    rng: &mut R,
) -> usize {
    let dist = nucleus(logits, temperature, top_p);
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    for &(id, p) in &dist {
        cum += p;
        if u < cum {
            return id;
        }
    }
    dist.last().map_or(0, |d| d.0)
}

fn argmax(logits: &[f64]) -> usize {
    let mut best = 0;
    for (i, &l) in logits.iter().enumerate() {
        if l > logits[best] {
            best = i;
        }
    }
    best
}

/// Generated token ids (without `<eos>`) for an already encoded source.
/// Sources that do not fit the context are truncated; decoding also stops
/// when the context is full.
pub fn generate_ids<R: Rng>(
    model: &Model,
    source: &[usize],
    gcfg: &GenConfig,
    rng: &mut R,
) -> Vec<usize> {
    let context = model.config.context_len;
    let keep = source.len().min(context.saturating_sub(2));
    let mut ids = Vec::with_capacity(context);
    ids.push(BOS);
    ids.extend_from_slice(&source[..keep]);
    ids.push(SEP);
    let prompt = ids.len();
    let vocab = model.vocab.len();
    for _ in 0..gcfg.max_new_tokens {
        if ids.len() > context {
            break;
        }
        let logits = model.logits(&ids);
        let mut last = logits[(ids.len() - 1) * vocab..].to_vec();
        for banned in [PAD, BOS, SEP] {
            last[banned] = f64::NEG_INFINITY;
        }
        let next = if gcfg.greedy {
            argmax(&last)
        } else {
            sample_from_logits(&last, gcfg.temperature, gcfg.top_p, rng)
        };
        if next == EOS {
            break;
        }
        ids.push(next);
    }
    ids.split_off(prompt)
}

pub fn decode(vocab: &Vocab, ids: &[usize]) -> String {
    let tokens: Vec<&str> = ids.iter().map(|&id| vocab.token(id)).collect();
    detokenize(&tokens)
}

/// Simplification of `source`, sampled with a generator seeded from `gcfg.seed`.
pub fn generate(model: &Model, source: &str, gcfg: &GenConfig) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(gcfg.seed);
    let ids = generate_ids(model, &model.vocab.encode(source), gcfg, &mut rng);
    decode(&model.vocab, &ids)
}

/// Scores a candidate simplification; higher is better.
pub trait Critic {
    fn score(&self, source: &str, candidate: &str) -> f64;
}

impl<F: Fn(&str, &str) -> f64> Critic for F {
    fn score(&self, source: &str, candidate: &str) -> f64 {
        self(source, candidate)
    }
}

/// Reference-free composite:
/// `-difficult_words - |fkgl - target_fkgl| - length_weight * |Δwords| / max(1, source words)`.
#[derive(Clone, Debug)]
pub struct MetricCritic {
    pub easy: EasyWordList,
    pub target_fkgl: f64,
    pub length_weight: f64,
}

impl Default for MetricCritic {
    fn default() -> Self {
        MetricCritic {
            easy: EasyWordList::dale_chall(),
            target_fkgl: 8.0,
            length_weight: 5.0,
        }
    }
}

impl Critic for MetricCritic {
    fn score(&self, source: &str, candidate: &str) -> f64 {
        let src_words = count_words(source);
        let cand_words = count_words(candidate);
        let length = libm::fabs(cand_words as f64 - src_words as f64) / src_words.max(1) as f64;
        -(difficult_words(candidate, &self.easy) as f64)
            - libm::fabs(fkgl(candidate) - self.target_fkgl)
            - self.length_weight * length
    }
}

/// Draws `n` candidates and returns the one the critic scores highest
/// (earliest candidate on ties). Candidate `i` uses temperature
/// `temperatures[i % len]` (or `gcfg.temperature` when the list is empty) and
/// seed `gcfg.seed + i`, so `n = 1` reproduces [`generate`] at that temperature.
pub fn repeated_sample(
    model: &Model,
    source: &str,
    gcfg: &GenConfig,
    n: usize,
    temperatures: &[f64],
    critic: &dyn Critic,
) -> String {
    let mut best: Option<(f64, String)> = None;
    for i in 0..n.max(1) {
        let cfg = GenConfig {
            temperature: if temperatures.is_empty() {
                gcfg.temperature
            } else {
                temperatures[i % temperatures.len()]
            },
            seed: gcfg.seed.wrapping_add(i as u64),
            ..gcfg.clone()
        };
        let candidate = generate(model, source, &cfg);
        let score = critic.score(source, &candidate);
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, candidate));
        }
    }
    best.map(|b| b.1).unwrap_or_default()
}
