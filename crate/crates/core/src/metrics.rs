//! Simplification metrics and corpus reports.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::diff::levenshtein;
use crate::text::{
    count_words, is_punctuation, is_terminal_punctuation, token_syllables, tokenize_words, Corpus,
    TokenSeq,
};
use crate::Error;

const MAX_ORDER: usize = 4;

/// Score given to a SARI component that has nothing to measure on either side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vacuous {
    /// A component with no system-side and no reference-side n-grams scores 1.
    #[default]
    One,
    /// Empty denominators score 0, as in the original released script.
    Zero,
}

/// Averaged SARI components, each in `[0, 1]`, and the final score in `[0, 100]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SariBreakdown {
    pub keep: f64,
    pub delete: f64,
    pub add: f64,
    pub score: f64,
}

type Counts<'a> = BTreeMap<&'a [String], usize>;

fn ngram_counts<'a>(tokens: &'a [String], n: usize, scale: usize, into: &mut Counts<'a>) {
    if tokens.len() < n {
        return;
    }
    for gram in tokens.windows(n) {
        *into.entry(gram).or_insert(0) += scale;
    }
}

fn intersect<'a>(a: &Counts<'a>, b: &Counts<'a>) -> Counts<'a> {
    a.iter()
        .filter_map(|(g, &ca)| b.get(g).map(|&cb| (*g, ca.min(cb))))
        .collect()
}

fn subtract<'a>(a: &Counts<'a>, b: &Counts<'a>) -> Counts<'a> {
    a.iter()
        .filter_map(|(g, &ca)| {
            let left = ca.saturating_sub(b.get(g).copied().unwrap_or(0));
            (left > 0).then_some((*g, left))
        })
        .collect()
}

fn ratio(num: f64, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p > 0.0 || r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// `(keep, delete, add)` for one n-gram order.
fn sari_order(
    source: &[String],
    output: &[String],
    references: &[&[String]],
    n: usize,
    vacuous: Vacuous,
) -> (f64, f64, f64) {
    let numref = references.len();
    let mut s = Counts::new();
    let mut c = Counts::new();
    let mut r = Counts::new();
    ngram_counts(source, n, numref, &mut s);
    ngram_counts(output, n, numref, &mut c);
    for reference in references {
        ngram_counts(reference, n, 1, &mut r);
    }

    let keep_sys = intersect(&s, &c);
    let keep_good = intersect(&keep_sys, &r);
    let keep_all = intersect(&s, &r);
    let frac = |good: &Counts, g: &[String], den: usize| {
        good.get(g).copied().unwrap_or(0) as f64 / den as f64
    };
    let keep = if vacuous == Vacuous::One && keep_sys.is_empty() && keep_all.is_empty() {
        1.0
    } else {
        let p: f64 = keep_sys.iter().map(|(g, &k)| frac(&keep_good, g, k)).sum();
        let rc: f64 = keep_all.iter().map(|(g, &k)| frac(&keep_good, g, k)).sum();
        f1(ratio(p, keep_sys.len()), ratio(rc, keep_all.len()))
    };

    let del_sys = subtract(&s, &c);
    let del_good = subtract(&del_sys, &r);
    let del_all = subtract(&s, &r);
    let delete = if vacuous == Vacuous::One && del_sys.is_empty() && del_all.is_empty() {
        1.0
    } else {
        let p: f64 = del_sys.iter().map(|(g, &k)| frac(&del_good, g, k)).sum();
        ratio(p, del_sys.len())
    };

    let add_sys: BTreeSet<&[String]> = c.keys().filter(|g| !s.contains_key(*g)).copied().collect();
    let add_all: BTreeSet<&[String]> = r.keys().filter(|g| !s.contains_key(*g)).copied().collect();
    let add = if vacuous == Vacuous::One && add_sys.is_empty() && add_all.is_empty() {
        1.0
    } else {
        let good = add_sys.iter().filter(|g| r.contains_key(*g)).count() as f64;
        f1(ratio(good, add_sys.len()), ratio(good, add_all.len()))
    };
    (keep, delete, add)
}

/// SARI with explicit vacuous-component handling and the per-component breakdown.
pub fn sari_breakdown(
    source: &TokenSeq,
    output: &TokenSeq,
    references: &[TokenSeq],
    vacuous: Vacuous,
) -> Result<SariBreakdown, Error> {
    if references.is_empty() {
        return Err(Error::NoReferences);
    }
    let refs: Vec<&[String]> = references.iter().map(TokenSeq::tokens).collect();
    let (mut keep, mut delete, mut add) = (0.0, 0.0, 0.0);
    for n in 1..=MAX_ORDER {
        let (k, d, a) = sari_order(source.tokens(), output.tokens(), &refs, n, vacuous);
        keep += k;
        delete += d;
        add += a;
    }
    let order = MAX_ORDER as f64;
    let (keep, delete, add) = (keep / order, delete / order, add / order);
    Ok(SariBreakdown {
        keep,
        delete,
        add,
        score: 100.0 * (keep + delete + add) / 3.0,
    })
}

/// Sentence SARI in `[0, 100]`: mean of keep F1, delete precision and add F1
/// over n-gram orders 1 to 4.
pub fn sari(source: &TokenSeq, output: &TokenSeq, references: &[TokenSeq]) -> Result<f64, Error> {
    sari_breakdown(source, output, references, Vacuous::One).map(|b| b.score)
}

/// Corpus BLEU-4 in `[0, 100]`.
///
/// Clipped n-gram counts and lengths are summed over the corpus; the
/// brevity penalty uses the reference length closest to each output (the
/// shorter one on ties). When any order from 2 to 4 has zero matches, orders
/// 2 to 4 all use add-one smoothing `(m + 1) / (t + 1)`. Zero total output
/// length or zero unigram matches give 0.
pub fn bleu(outputs: &[TokenSeq], references: &[Vec<TokenSeq>]) -> Result<f64, Error> {
    if outputs.len() != references.len() {
        return Err(Error::Misaligned {
            outputs: outputs.len(),
            references: references.len(),
        });
    }
    let mut matches = [0usize; MAX_ORDER];
    let mut totals = [0usize; MAX_ORDER];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for (out, refs) in outputs.iter().zip(references) {
        if refs.is_empty() {
            return Err(Error::NoReferences);
        }
        let len = out.len();
        hyp_len += len;
        ref_len += refs
            .iter()
            .map(TokenSeq::len)
            .min_by_key(|&r| (r.abs_diff(len), r))
            .unwrap_or(0);
        for n in 1..=MAX_ORDER {
            let mut hyp = Counts::new();
            ngram_counts(out.tokens(), n, 1, &mut hyp);
            let mut max_ref = Counts::new();
            for reference in refs {
                let mut rc = Counts::new();
                ngram_counts(reference.tokens(), n, 1, &mut rc);
                for (g, k) in rc {
                    let slot = max_ref.entry(g).or_insert(0);
                    *slot = (*slot).max(k);
                }
            }
            matches[n - 1] += hyp
                .iter()
                .map(|(g, &k)| k.min(max_ref.get(g).copied().unwrap_or(0)))
                .sum::<usize>();
            totals[n - 1] += out.len().saturating_sub(n - 1);
        }
    }
    if hyp_len == 0 || matches[0] == 0 {
        return Ok(0.0);
    }
    let smooth = matches[1..].contains(&0);
    let mut log_sum = libm::log(matches[0] as f64 / totals[0] as f64);
    for n in 1..MAX_ORDER {
        let p = if smooth {
            (matches[n] + 1) as f64 / (totals[n] + 1) as f64
        } else {
            matches[n] as f64 / totals[n] as f64
        };
        log_sum += libm::log(p);
    }
    let bp = if hyp_len > ref_len {
        1.0
    } else {
        libm::exp(1.0 - ref_len as f64 / hyp_len as f64)
    };
    Ok(100.0 * bp * libm::exp(log_sum / MAX_ORDER as f64))
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// LCS F-measure (β = 1) in `[0, 100]`. Two empty sequences score 0.
pub fn rouge_l(output: &TokenSeq, reference: &TokenSeq) -> f64 {
    let lcs = lcs_len(output.tokens(), reference.tokens());
    if lcs == 0 {
        return 0.0;
    }
    let p = lcs as f64 / output.len() as f64;
    let r = lcs as f64 / reference.len() as f64;
    100.0 * 2.0 * p * r / (p + r)
}

/// Max ROUGE-L over several references.
pub fn rouge_l_multi(output: &TokenSeq, references: &[TokenSeq]) -> f64 {
    references
        .iter()
        .map(|r| rouge_l(output, r))
        .fold(0.0, f64::max)
}

/// Number of sentences: runs of words closed by `.`, `!` or `?` (or by the
/// end of text), at least 1.
pub fn count_sentences(text: &str) -> usize {
    let seq = tokenize_words(text);
    let mut count = 0;
    let mut open = false;
    for tok in seq.tokens() {
        if is_terminal_punctuation(tok) {
            if open {
                count += 1;
            }
            open = false;
        } else if !is_punctuation(tok) {
            open = true;
        }
    }
    if open {
        count += 1;
    }
    count.max(1)
}

/// Flesch-Kincaid grade level. With no words both ratios are taken as 0.
pub fn fkgl(text: &str) -> f64 {
    let seq = tokenize_words(text);
    let words: Vec<&String> = seq.tokens().iter().filter(|t| !is_punctuation(t)).collect();
    let (words_per_sentence, syllables_per_word) = if words.is_empty() {
        (0.0, 0.0)
    } else {
        let syllables: usize = words.iter().map(|w| token_syllables(w)).sum();
        let n = words.len() as f64;
        (n / count_sentences(text) as f64, syllables as f64 / n)
    };
    0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59
}

/// Lowercased set of words that never count as difficult.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EasyWordList {
    words: BTreeSet<String>,
}

const DALE_CHALL: &str = include_str!("../assets/dale_chall_easy.txt");

impl EasyWordList {
    /// Parses one word per line; blank lines are skipped. Fails on an empty list.
    pub fn parse(list: &str) -> Result<Self, Error> {
        let words: BTreeSet<String> = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return Err(Error::Config {
                field: "easy_words",
                reason: "word list is empty".to_string(),
            });
        }
        Ok(EasyWordList { words })
    }

    /// The bundled Dale-Chall easy word list.
    pub fn dale_chall() -> Self {
        Self::parse(DALE_CHALL).expect("bundled list is non-empty")
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Unique words with two or more syllables that are not on the easy list.
pub fn difficult_words(text: &str, easy: &EasyWordList) -> usize {
    let seq = tokenize_words(text);
    let unique: BTreeSet<String> = seq
        .tokens()
        .iter()
        .filter(|t| !is_punctuation(t))
        .map(|t| t.to_lowercase())
        .collect();
    unique
        .iter()
        .filter(|w| token_syllables(w) >= 2 && !easy.contains(w))
        .count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceScores {
    pub id: String,
    pub sari: f64,
    pub bleu: f64,
    pub rouge_l: f64,
    pub fkgl: f64,
    pub difficult_words: usize,
    pub word_count: usize,
    pub edit_distance: usize,
}

/// Corpus aggregates: means of the sentence values, except BLEU which is
/// computed at corpus level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusScores {
    pub sari: f64,
    pub bleu: f64,
    pub rouge_l: f64,
    pub fkgl: f64,
    pub difficult_words: f64,
    pub word_count: f64,
    pub edit_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_sentence: Vec<SentenceScores>,
    pub corpus: CorpusScores,
}

fn similarity_tokens(text: &str) -> TokenSeq {
    tokenize_words(text).to_lowercase()
}

/// Scores every pair's output. Similarity metrics run on lowercased word
/// tokens; edit distance runs on the raw source and output text. Records are
/// ordered by id.
pub fn evaluate_corpus(
    corpus: &Corpus,
    outputs: &BTreeMap<String, String>,
    easy: &EasyWordList,
) -> Result<EvalReport, Error> {
    let missing: Vec<String> = corpus
        .iter()
        .filter(|p| !outputs.contains_key(&p.id))
        .map(|p| p.id.clone())
        .collect();
    let known: BTreeSet<&str> = corpus.iter().map(|p| p.id.as_str()).collect();
    let extra: Vec<String> = outputs
        .keys()
        .filter(|id| !known.contains(id.as_str()))
        .cloned()
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Error::IdMismatch { missing, extra });
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let mut pairs: Vec<_> = corpus.iter().collect();
    pairs.sort_by(|a, b| a.id.cmp(&b.id));

    let mut per_sentence = Vec::with_capacity(pairs.len());
    let mut all_outputs = Vec::with_capacity(pairs.len());
    let mut all_refs = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let output = &outputs[&pair.id];
        let src = similarity_tokens(&pair.source);
        let out = similarity_tokens(output);
        let refs: Vec<TokenSeq> = pair
            .references
            .iter()
            .map(|r| similarity_tokens(r))
            .collect();
        per_sentence.push(SentenceScores {
            id: pair.id.clone(),
            sari: sari(&src, &out, &refs)?,
            bleu: bleu(core::slice::from_ref(&out), core::slice::from_ref(&refs))?,
            rouge_l: rouge_l_multi(&out, &refs),
            fkgl: fkgl(output),
            difficult_words: difficult_words(output, easy),
            word_count: count_words(output),
            edit_distance: levenshtein(&pair.source, output),
        });
        all_outputs.push(out);
        all_refs.push(refs);
    }

    let n = per_sentence.len() as f64;
    let mean = |f: &dyn Fn(&SentenceScores) -> f64| per_sentence.iter().map(f).sum::<f64>() / n;
    let corpus_scores = CorpusScores {
        sari: mean(&|s| s.sari),
        bleu: bleu(&all_outputs, &all_refs)?,
        rouge_l: mean(&|s| s.rouge_l),
        fkgl: mean(&|s| s.fkgl),
        difficult_words: mean(&|s| s.difficult_words as f64),
        word_count: mean(&|s| s.word_count as f64),
        edit_distance: mean(&|s| s.edit_distance as f64),
    };
    Ok(EvalReport {
        per_sentence,
        corpus: corpus_scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::AlignedPair;

    fn seq(text: &str) -> TokenSeq {
        tokenize_words(text)
    }

    #[test]
    fn sari_identity_is_perfect() {
        let s = seq("the cat sat on the mat");
        assert_eq!(sari(&s, &s, core::slice::from_ref(&s)).unwrap(), 100.0);
        // Shorter than every n-gram order.
        let w = seq("cat");
        assert_eq!(sari(&w, &w, core::slice::from_ref(&w)).unwrap(), 100.0);
    }

    #[test]
    fn sari_original_convention_differs_on_vacuous_parts() {
        let s = seq("a b c");
        let b = sari_breakdown(&s, &s, core::slice::from_ref(&s), Vacuous::Zero).unwrap();
        assert_eq!(b.delete, 0.0);
        assert_eq!(b.add, 0.0);
        // keep: orders 1..3 perfect, order 4 has no n-grams at all.
        assert_eq!(b.keep, 0.75);
    }

    #[test]
    fn sari_requires_references() {
        let s = seq("a");
        assert!(matches!(sari(&s, &s, &[]), Err(Error::NoReferences)));
    }

    #[test]
    fn sari_copy_scores_no_add_or_delete() {
        let src = seq("the physician administered the medication");
        let reference = seq("the doctor gave the medicine");
        let b = sari_breakdown(&src, &src, &[reference], Vacuous::One).unwrap();
        assert_eq!(b.add, 0.0);
        assert_eq!(b.delete, 0.0);
        assert!(b.keep > 0.0);
    }

    #[test]
    fn bleu_examples() {
        let a = seq("the cat sat on the mat");
        let b = seq("a dog");
        assert_eq!(
            bleu(&[a.clone(), b.clone()], &[vec![a.clone()], vec![b.clone()]]).unwrap(),
            100.0
        );
        assert_eq!(
            bleu(&[TokenSeq::default()], &[vec![a.clone()]]).unwrap(),
            0.0
        );
        assert!(matches!(
            bleu(core::slice::from_ref(&a), &[]),
            Err(Error::Misaligned { .. })
        ));
    }

    #[test]
    fn bleu_brevity_penalty() {
        let reference = seq("a b c d e f g h");
        let short = seq("a b c d");
        let score = bleu(&[short], &[vec![reference]]).unwrap();
        assert!((score - 100.0 * libm::exp(1.0 - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn rouge_examples() {
        let a = seq("a b c d");
        assert_eq!(rouge_l(&a, &a), 100.0);
        assert_eq!(rouge_l(&a, &seq("x y")), 0.0);
        assert_eq!(rouge_l(&TokenSeq::default(), &TokenSeq::default()), 0.0);
        // lcs 2, p = 2/4, r = 2/2
        assert!((rouge_l(&a, &seq("b d")) - 100.0 * 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(rouge_l_multi(&a, &[seq("x"), a.clone()]), 100.0);
    }

    #[test]
    fn fkgl_examples() {
        assert_eq!(fkgl(""), -15.59);
        assert!((fkgl("Cat.") - (0.39 + 11.8 - 15.59)).abs() < 1e-12);
        assert!((fkgl("Cat.") - -3.40).abs() < 1e-9);
        assert_eq!(count_sentences("One. Two! Three"), 3);
        assert_eq!(count_sentences("..."), 1);
    }

    #[test]
    fn difficult_word_examples() {
        let easy = EasyWordList::dale_chall();
        assert_eq!(difficult_words("", &easy), 0);
        assert_eq!(difficult_words("the cat sat", &easy), 0);
        assert_eq!(
            difficult_words("Hypertension and hypertension, physician.", &easy),
            2
        );
        assert!(EasyWordList::parse("\n  \n").is_err());
    }

    #[test]
    fn evaluate_reports_id_mismatch() {
        let corpus = Corpus::new(vec![AlignedPair::new("a", "x", vec!["y".into()])]).unwrap();
        let mut outputs = BTreeMap::new();
        outputs.insert("b".to_string(), "y".to_string());
        let err = evaluate_corpus(&corpus, &outputs, &EasyWordList::dale_chall()).unwrap_err();
        assert_eq!(
            err,
            Error::IdMismatch {
                missing: vec!["a".into()],
                extra: vec!["b".into()]
            }
        );
    }
}
