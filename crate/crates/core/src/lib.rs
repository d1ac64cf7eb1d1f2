//! Edit-operation loss weighting for text simplification.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. It covers:
//!
//! * [`text`]: word/char tokenization with byte spans, the pair/corpus model.
//! * [`diff`]: character Levenshtein distance and a longest-matching-block
//!   sequence matcher producing `equal/replace/insert/delete` opcodes.
//! * [`weights`]: sentence weights `w(d)` calibrated to 1 at the mean edit
//!   distance, and token weights that raise edited target tokens to `λ`.
//! * [`metrics`]: SARI, BLEU, ROUGE-L, FKGL, difficult words, corpus reports.
//! * [`model`]: a small decoder-only transformer trained with weighted cross
//!   entropy, nucleus sampling, repeated sampling with a critic, and a
//!   synthetic simplification corpus.

#![no_std]
extern crate alloc;

pub mod diff;
pub mod metrics;
pub mod model;
pub mod text;
pub mod weights;

use alloc::string::String;
use alloc::vec::Vec;

pub use diff::{edited_target_mask, levenshtein, opcodes, Opcode, OpcodeAlignment, Tag};
pub use metrics::{EasyWordList, EvalReport, SentenceScores};
pub use text::{count_syllables, count_words, tokenize, AlignedPair, Corpus, TokenMode, TokenSeq};
pub use weights::{
    pair_weights, sentence_weight, token_weights, PairWeights, SentenceWeightFn, Shape,
    WeightVector, Weighting,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syllable count requested for an empty word")]
    EmptyWord,
    #[error("duplicate pair id `{0}`")]
    DuplicateId(String),
    #[error("mask length {expected} does not match target length {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("mean distance must be positive and finite, got {0}")]
    InvalidMean(f64),
    #[error("{0} must be non-negative and finite, got {1}")]
    Negative(&'static str, f64),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("at least one reference is required")]
    NoReferences,
    #[error("{outputs} outputs but {references} reference sets")]
    Misaligned { outputs: usize, references: usize },
    #[error("output ids do not match corpus ids (missing: [{}], unexpected: [{}])", .missing.join(", "), .extra.join(", "))]
    IdMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("invalid config field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("non-finite loss at step {step}")]
    Diverged { step: usize },
    #[error("sequence of {len} tokens exceeds context length {context}")]
    ContextOverflow { len: usize, context: usize },
}
