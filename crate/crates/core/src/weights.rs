//! Loss weights derived from edits.
//!
//! Sentence level: a pair's whole loss is scaled by `w(d)`, where `d` is the
//! character edit distance between source and reference and `w` is linear or
//! quadratic in `d / μ` with `w(μ) = 1`.
//!
//! Token level: target tokens inside a `replace` or `insert` opcode get
//! weight `λ`, every other target token gets 1. Deleted source tokens have
//! no target position and so carry no weight.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::diff::{edited_target_mask, levenshtein, opcodes};
use crate::text::{tokenize_words, AlignedPair, Corpus, TokenSeq};
use crate::Error;

/// Mean character edit distance of the PLABA training pairs.
pub const PLABA_MEAN_DISTANCE: f64 = 86.49;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Linear,
    Quadratic,
}

/// `w(d) = a + (1 - a) * (d / μ)^p` with `p = 1` (linear) or `p = 2` (quadratic).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceWeightFn {
    shape: Shape,
    mean_distance: f64,
    offset: f64,
}

impl SentenceWeightFn {
    pub fn new(shape: Shape, mean_distance: f64, offset: f64) -> Result<Self, Error> {
        if !(mean_distance > 0.0 && mean_distance.is_finite()) {
            return Err(Error::InvalidMean(mean_distance));
        }
        // Offsets above 1 would make w decreasing in d.
        if !(0.0..=1.0).contains(&offset) {
            return Err(Error::Config {
                field: "offset",
                reason: alloc::format!("must lie in [0, 1], got {offset}"),
            });
        }
        Ok(SentenceWeightFn {
            shape,
            mean_distance,
            offset,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn mean_distance(&self) -> f64 {
        self.mean_distance
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn weight(&self, distance: f64) -> f64 {
        let r = distance / self.mean_distance;
        let scaled = match self.shape {
            Shape::Linear => r,
            Shape::Quadratic => r * r,
        };
        // Written so that r == 1 gives exactly a + (1 - a) == 1.
        self.offset + (1.0 - self.offset) * scaled
    }
}

impl Default for SentenceWeightFn {
    fn default() -> Self {
        SentenceWeightFn {
            shape: Shape::Linear,
            mean_distance: PLABA_MEAN_DISTANCE,
            offset: 0.0,
        }
    }
}

pub fn sentence_weight(f: &SentenceWeightFn, distance: f64) -> Result<f64, Error> {
    if !(distance >= 0.0 && distance.is_finite()) {
        return Err(Error::Negative("distance", distance));
    }
    Ok(f.weight(distance))
}

/// Per-target-token loss weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn ones(len: usize) -> Self {
        WeightVector(vec![1.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn token_weights(
    source: &TokenSeq,
    target: &TokenSeq,
    lambda: f64,
) -> Result<WeightVector, Error> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Negative("lambda", lambda));
    }
    let align = opcodes(source.tokens(), target.tokens());
    let mask = edited_target_mask(&align, target.len())?;
    Ok(WeightVector(
        mask.into_iter()
            .map(|edited| if edited { lambda } else { 1.0 })
            .collect(),
    ))
}

/// Mean of `levenshtein(source, first reference)` over the corpus.
pub fn corpus_mean_edit_distance(corpus: &Corpus) -> Result<f64, Error> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let total: usize = corpus
        .iter()
        .map(|p| levenshtein(&p.source, p.first_reference()))
        .sum();
    Ok(total as f64 / corpus.len() as f64)
}

/// How per-token losses are weighted during training.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    None,
    /// Whole-pair weight `w(d)` from the character edit distance.
    Sentence,
    /// Edited target tokens weighted by `λ`.
    Token,
    /// Weights supplied by the caller (for example from a weight export file).
    External,
}

/// Loss weights for one pair, against its first reference. The effective
/// weight of target token `i` is `sentence * tokens[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairWeights {
    pub id: String,
    #[serde(rename = "sentence_weight")]
    pub sentence: f64,
    #[serde(rename = "token_weights")]
    pub tokens: Vec<f64>,
}

/// Computes [`PairWeights`] for `Weighting::None`, `Sentence` or `Token`.
/// `External` weights cannot be derived and yield a config error.
pub fn pair_weights(
    pair: &AlignedPair,
    mode: Weighting,
    lambda: f64,
    sentence_fn: &SentenceWeightFn,
) -> Result<PairWeights, Error> {
    let target = tokenize_words(pair.first_reference());
    let (sentence, tokens) = match mode {
        Weighting::None => (1.0, WeightVector::ones(target.len())),
        Weighting::Sentence => {
            let d = levenshtein(&pair.source, pair.first_reference()) as f64;
            (
                sentence_weight(sentence_fn, d)?,
                WeightVector::ones(target.len()),
            )
        }
        Weighting::Token => (
            1.0,
            token_weights(&tokenize_words(&pair.source), &target, lambda)?,
        ),
        Weighting::External => {
            return Err(Error::Config {
                field: "weighting",
                reason: "external weights must be supplied, not derived".into(),
            })
        }
    };
    Ok(PairWeights {
        id: pair.id.clone(),
        sentence,
        tokens: tokens.0,
    })
}
