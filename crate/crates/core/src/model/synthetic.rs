//! Synthetic simplification corpus.
//!
//! Sources are filled-in templates whose slots draw either a plain word or a
//! "complex" word that has a rewrite rule. References apply each rule
//! independently with its own rate: word substitutions (`physician` →
//! `doctor`) and sentence splits (a conjunction becoming `.`). Every rewrite
//! replaces one token with one token, so source and reference have the same
//! length and the rates directly control the mean edit distance.
//!
//! Because a kept complex word and its rewrite share the same source context,
//! the best a model can do is predict the rewrite with the rule's rate; token
//! weighting with `λ` tilts that prediction towards the rewrite.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::text::{detokenize, AlignedPair, Corpus};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rewrite {
    pub from: String,
    pub to: String,
    /// Probability that a reference applies this rewrite.
    pub rate: f64,
}

impl Rewrite {
    fn new(from: &str, to: &str, rate: f64) -> Self {
        Rewrite {
            from: from.to_string(),
            to: to.to_string(),
            rate,
        }
    }

    fn is_effective(&self) -> bool {
        self.from != self.to && self.rate > 0.0
    }
}

/// Words that can fill a `{name}` template slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotClass {
    pub name: String,
    pub rewrites: Vec<Rewrite>,
    pub plain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthRules {
    pub slots: Vec<SlotClass>,
    /// Whitespace-separated tokens; `{name}` marks a slot.
    pub templates: Vec<String>,
    /// Probability that a slot draws a word with a rewrite rule.
    pub complex_share: f64,
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

impl Default for SynthRules {
    /// Medical-flavoured lexicon: substitutions with rates from 0.06 to 0.55
    /// and three conjunction splits. Both templates have 14 tokens.
    fn default() -> Self {
        let slots = alloc::vec![
            SlotClass {
                name: "adj".into(),
                rewrites: alloc::vec![
                    Rewrite::new("elderly", "old", 0.5),
                    Rewrite::new("pediatric", "young", 0.35),
                    Rewrite::new("chronic", "long", 0.25),
                    Rewrite::new("pulmonary", "lung", 0.15),
                    Rewrite::new("cardiac", "heart", 0.08),
                ],
                plain: words(&["sick", "tired", "new", "small"]),
            },
            SlotClass {
                name: "noun".into(),
                rewrites: alloc::vec![
                    Rewrite::new("physician", "doctor", 0.55),
                    Rewrite::new("medication", "drug", 0.4),
                    Rewrite::new("individual", "person", 0.3),
                    Rewrite::new("laboratory", "lab", 0.2),
                    Rewrite::new("abdomen", "belly", 0.12),
                    Rewrite::new("analgesic", "painkiller", 0.06),
                ],
                plain: words(&["nurse", "patient", "man", "woman", "child"]),
            },
            SlotClass {
                name: "verb".into(),
                rewrites: alloc::vec![
                    Rewrite::new("administered", "gave", 0.5),
                    Rewrite::new("examined", "checked", 0.35),
                    Rewrite::new("utilized", "used", 0.25),
                    Rewrite::new("monitored", "watched", 0.15),
                    Rewrite::new("evaluated", "tested", 0.08),
                ],
                plain: words(&["saw", "helped", "met", "called"]),
            },
            SlotClass {
                name: "conj".into(),
                rewrites: alloc::vec![
                    Rewrite::new("whereas", ".", 0.45),
                    Rewrite::new("while", ".", 0.3),
                    Rewrite::new("and", ".", 0.2),
                ],
                plain: Vec::new(),
            },
        ];
        SynthRules {
            slots,
            templates: alloc::vec![
                "the {adj} {noun} {verb} the {noun} {conj} the {adj} {noun} {verb} the {noun} ."
                    .into(),
                "the {noun} {verb} the {adj} {noun} {conj} the {noun} {verb} the {adj} {noun} ."
                    .into(),
            ],
            complex_share: 0.6,
        }
    }
}

impl SynthRules {
    /// Default lexicon with every rewrite mapping a word to itself.
    pub fn identity() -> Self {
        let mut rules = Self::default();
        for slot in &mut rules.slots {
            for rw in &mut slot.rewrites {
                rw.to = rw.from.clone();
            }
        }
        rules
    }

    fn slot(&self, name: &str) -> Option<&SlotClass> {
        self.slots.iter().find(|s| s.name == name)
    }
}

enum Piece<'a> {
    Word(&'a str),
    Slot(&'a SlotClass),
}

fn parse_template<'a>(rules: &'a SynthRules, template: &'a str) -> Result<Vec<Piece<'a>>, Error> {
    template
        .split_whitespace()
        .map(
            |tok| match tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
                Some(name) => rules
                    .slot(name)
                    .map(Piece::Slot)
                    .ok_or_else(|| Error::Config {
                        field: "templates",
                        reason: format!("unknown slot `{name}`"),
                    }),
                None => Ok(Piece::Word(tok)),
            },
        )
        .collect()
}

/// `n` pairs with ids `syn-00000`, `syn-00001`, ... Whenever the rules can
/// produce an edit, every reference differs from its source: edit decisions
/// are redrawn up to 64 times and then the most likely rewrite is forced.
pub fn make_synthetic_corpus(rules: &SynthRules, n: usize, seed: u64) -> Result<Corpus, Error> {
    if rules.templates.is_empty() || rules.slots.is_empty() {
        return Err(Error::Config {
            field: "rules",
            reason: "need at least one template and one slot class".to_string(),
        });
    }
    for slot in &rules.slots {
        if slot.rewrites.is_empty() && slot.plain.is_empty() {
            return Err(Error::Config {
                field: "slots",
                reason: format!("slot `{}` has no words", slot.name),
            });
        }
    }
    let templates = rules
        .templates
        .iter()
        .map(|t| parse_template(rules, t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let template = templates.choose(&mut rng).expect("non-empty");
        let mut source: Vec<&str> = Vec::with_capacity(template.len());
        let mut sites: Vec<(usize, &Rewrite)> = Vec::new();
        for piece in template {
            match piece {
                Piece::Word(w) => source.push(w),
                Piece::Slot(slot) => {
                    let use_rule = slot.plain.is_empty()
                        || (!slot.rewrites.is_empty() && rng.gen_bool(rules.complex_share));
                    if use_rule {
                        let rw = slot.rewrites.choose(&mut rng).expect("non-empty");
                        sites.push((source.len(), rw));
                        source.push(&rw.from);
                    } else {
                        source.push(slot.plain.choose(&mut rng).expect("non-empty"));
                    }
                }
            }
        }

        let can_edit = sites.iter().any(|(_, rw)| rw.is_effective());
        let mut decisions: Vec<bool> = Vec::new();
        for _ in 0..64 {
            decisions = sites
                .iter()
                .map(|(_, rw)| rng.gen_bool(rw.rate.clamp(0.0, 1.0)))
                .collect();
            let edited = sites
                .iter()
                .zip(&decisions)
                .any(|((_, rw), &d)| d && rw.from != rw.to);
            if edited || !can_edit {
                break;
            }
        }
        let edited = sites
            .iter()
            .zip(&decisions)
            .any(|((_, rw), &d)| d && rw.from != rw.to);
        if can_edit && !edited {
            let best = (0..sites.len())
                .filter(|&k| sites[k].1.is_effective())
                .max_by(|&a, &b| sites[a].1.rate.total_cmp(&sites[b].1.rate).then(b.cmp(&a)))
                .expect("an effective site exists");
            decisions[best] = true;
        }

        let mut reference = source.clone();
        for ((pos, rw), apply) in sites.iter().zip(&decisions) {
            if *apply {
                reference[*pos] = &rw.to;
            }
        }
        pairs.push(AlignedPair::new(
            format!("syn-{i:05}"),
            detokenize(&source),
            alloc::vec![detokenize(&reference)],
        ));
    }
    Corpus::new(pairs)
}
