//! Tokenization and the sentence/corpus data model.
//!
//! Word mode splits on whitespace and then peels ASCII punctuation off both
//! ends of every chunk, one token per punctuation character. Interior
//! punctuation (`alternate-day`, `don't`) stays inside the word. Every token
//! carries a byte span into the original text, so the gaps between spans are
//! exactly the whitespace that was dropped.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Tokenization granularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenMode {
    Word,
    Char,
}

/// A tokenized sentence with byte spans back into the text it came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSeq {
    tokens: Vec<String>,
    spans: Vec<Range<usize>>,
}

impl TokenSeq {
    /// Builds a sequence from bare tokens, laying them out as if joined by
    /// single spaces. Useful for tests and for generated outputs that never
    /// had a backing text.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut seq = TokenSeq::default();
        let mut offset = 0;
        for tok in tokens {
            let tok = tok.into();
            let end = offset + tok.len();
            seq.spans.push(offset..end);
            seq.tokens.push(tok);
            offset = end + 1;
        }
        seq
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn spans(&self) -> &[Range<usize>] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Rebuilds the original text from the tokens and the gaps between spans.
    pub fn reconstruct(&self, original: &str) -> String {
        let mut out = String::with_capacity(original.len());
        let mut cursor = 0;
        for (tok, span) in self.tokens.iter().zip(&self.spans) {
            out.push_str(&original[cursor..span.start]);
            out.push_str(tok);
            cursor = span.end;
        }
        out.push_str(&original[cursor..]);
        out
    }

    /// Lowercased copy; spans are kept as-is.
    pub fn to_lowercase(&self) -> TokenSeq {
        TokenSeq {
            tokens: self.tokens.iter().map(|t| t.to_lowercase()).collect(),
            spans: self.spans.clone(),
        }
    }

    fn push(&mut self, text: &str, span: Range<usize>) {
        self.tokens.push(text[span.clone()].to_string());
        self.spans.push(span);
    }
}

/// Splits `text` into tokens. Never fails; empty input yields an empty sequence.
pub fn tokenize(text: &str, mode: TokenMode) -> TokenSeq {
    let mut seq = TokenSeq::default();
    match mode {
        TokenMode::Char => {
            for (start, ch) in text.char_indices() {
                seq.push(text, start..start + ch.len_utf8());
            }
        }
        TokenMode::Word => {
            for chunk in whitespace_chunks(text) {
                split_edge_punctuation(text, chunk, &mut seq);
            }
        }
    }
    seq
}

pub fn tokenize_words(text: &str) -> TokenSeq {
    tokenize(text, TokenMode::Word)
}

fn whitespace_chunks(text: &str) -> impl Iterator<Item = Range<usize>> + '_ {
    let mut chunks = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                chunks.push(s..i);
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        chunks.push(s..text.len());
    }
    chunks.into_iter()
}

fn split_edge_punctuation(text: &str, chunk: Range<usize>, seq: &mut TokenSeq) {
    let bytes = text.as_bytes();
    let mut lo = chunk.start;
    let mut hi = chunk.end;
    // ASCII punctuation is always a single byte, so byte stepping is safe here.
    while lo < hi && bytes[lo].is_ascii_punctuation() {
        seq.push(text, lo..lo + 1);
        lo += 1;
    }
    let mut trailing = Vec::new();
    while hi > lo && bytes[hi - 1].is_ascii_punctuation() {
        hi -= 1;
        trailing.push(hi..hi + 1);
    }
    if lo < hi {
        seq.push(text, lo..hi);
    }
    for span in trailing.into_iter().rev() {
        seq.push(text, span);
    }
}

/// True for tokens made only of ASCII punctuation.
pub fn is_punctuation(token: &str) -> bool {
    !token.is_empty() && token.bytes().all(|b| b.is_ascii_punctuation())
}

/// Sentence-final punctuation used for sentence counting.
pub fn is_terminal_punctuation(token: &str) -> bool {
    matches!(token, "." | "!" | "?")
}

/// Number of word tokens that are not pure punctuation.
pub fn count_words(text: &str) -> usize {
    tokenize_words(text)
        .tokens()
        .iter()
        .filter(|t| !is_punctuation(t))
        .count()
}

fn is_vowel(ch: char) -> bool {
    matches!(ch, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable heuristic.
///
/// Counts maximal runs of `aeiouy` (case-insensitive) and drops one for a
/// silent terminal `e`. The `e` is not silent when it follows another vowel
/// (`free`) or closes a consonant + `le` ending (`table`). The result is
/// clamped to at least 1.
pub fn count_syllables(word: &str) -> Result<usize, Error> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let chars: Vec<char> = word.chars().flat_map(char::to_lowercase).collect();
    let mut groups = 0usize;
    let mut in_group = false;
    for &ch in &chars {
        let v = is_vowel(ch);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = chars.len();
    if n >= 2 && chars[n - 1] == 'e' && !is_vowel(chars[n - 2]) {
        let consonant_le = n >= 3 && chars[n - 2] == 'l' && !is_vowel(chars[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    Ok(groups.max(1))
}

/// Syllables in an arbitrary word token: hyphenated parts are counted
/// separately, apostrophes and other non-letters are ignored. Tokens with no
/// letters at all (numbers) count as one syllable.
pub(crate) fn token_syllables(token: &str) -> usize {
    let mut total = 0;
    for part in token.split(['-', '/']) {
        let letters: String = part.chars().filter(|c| c.is_alphabetic()).collect();
        if !letters.is_empty() {
            total += count_syllables(&letters).unwrap_or(1);
        }
    }
    total.max(1)
}

/// One source sentence with its reference simplifications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignedPair {
    pub id: String,
    pub source: String,
    pub references: Vec<String>,
}

impl AlignedPair {
    /// A pair whose reference list is empty is normalized to a single empty
    /// reference (a deleted sentence).
    pub fn new(id: impl Into<String>, source: impl Into<String>, references: Vec<String>) -> Self {
        let references = if references.is_empty() {
            alloc::vec![String::new()]
        } else {
            references
        };
        AlignedPair {
            id: id.into(),
            source: source.into(),
            references,
        }
    }

    pub fn first_reference(&self) -> &str {
        self.references.first().map(String::as_str).unwrap_or("")
    }
}

/// Ordered pairs with unique ids.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pairs: Vec<AlignedPair>,
}

impl Corpus {
    pub fn new(pairs: Vec<AlignedPair>) -> Result<Self, Error> {
        let mut ids: Vec<&str> = pairs.iter().map(|p| p.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateId(w[0].to_string()));
        }
        Ok(Corpus { pairs })
    }

    pub fn pairs(&self) -> &[AlignedPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, AlignedPair> {
        self.pairs.iter()
    }
}

/// Joins word tokens back into text: no space before closing punctuation,
/// none after opening brackets.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut glue_next = true;
    for tok in tokens {
        let tok = tok.as_ref();
        let closing = matches!(
            tok,
            "." | "," | ";" | ":" | "!" | "?" | ")" | "]" | "}" | "%"
        );
        if !glue_next && !closing {
            out.push(' ');
        }
        out.push_str(tok);
        glue_next = matches!(tok, "(" | "[" | "{");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn words(text: &str) -> Vec<String> {
        tokenize_words(text).tokens().to_vec()
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("", TokenMode::Word).is_empty());
        assert!(tokenize("", TokenMode::Char).is_empty());
        assert_eq!(count_words(""), 0);
    }

    #[test]
    fn word_mode_splits_edge_punctuation() {
        assert_eq!(words("The cat sat."), vec!["The", "cat", "sat", "."]);
        assert_eq!(
            words("(see: alternate-day)"),
            vec!["(", "see", ":", "alternate-day", ")"]
        );
        assert_eq!(words("don't..."), vec!["don't", ".", ".", "."]);
        assert_eq!(words("  --  "), vec!["-", "-"]);
    }

    #[test]
    fn char_mode() {
        assert_eq!(tokenize("ab", TokenMode::Char).tokens(), &["a", "b"]);
        assert_eq!(tokenize("né", TokenMode::Char).spans(), &[0..1, 1..3]);
    }

    #[test]
    fn spans_reconstruct() {
        let text = "  Hello,\tworld!  (x) ";
        let seq = tokenize_words(text);
        assert_eq!(seq.reconstruct(text), text);
        for (tok, span) in seq.tokens().iter().zip(seq.spans()) {
            assert_eq!(&text[span.clone()], tok);
        }
    }

    #[test]
    fn word_counts() {
        assert_eq!(count_words("The cat sat."), 3);
        assert_eq!(count_words("a, b."), 2);
    }

    #[test]
    fn syllables() {
        assert_eq!(count_syllables("cat").unwrap(), 1);
        assert_eq!(count_syllables("table").unwrap(), 2);
        assert_eq!(count_syllables("strength").unwrap(), 1);
        assert_eq!(count_syllables("the").unwrap(), 1);
        assert_eq!(count_syllables("make").unwrap(), 1);
        assert_eq!(count_syllables("free").unwrap(), 1);
        assert_eq!(count_syllables("hypertension").unwrap(), 4);
        assert_eq!(count_syllables("Physician").unwrap(), 3);
        assert_eq!(count_syllables("rhythm").unwrap(), 1);
        assert!(matches!(count_syllables(""), Err(Error::EmptyWord)));
    }

    #[test]
    fn token_syllables_handles_hyphens_and_numbers() {
        assert_eq!(
            token_syllables("alternate-day"),
            count_syllables("alternate").unwrap() + 1
        );
        assert_eq!(token_syllables("120"), 1);
        assert_eq!(token_syllables("don't"), 1);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let p = AlignedPair::new("a", "x", vec!["y".into()]);
        assert!(Corpus::new(vec![p.clone(), p]).is_err());
    }

    #[test]
    fn empty_reference_list_normalized() {
        let p = AlignedPair::new("a", "x", vec![]);
        assert_eq!(p.references, vec![String::new()]);
    }

    #[test]
    fn detokenize_inverts_simple_sentences() {
        let text = "The patient (aged 40) was seen, then left.";
        assert_eq!(detokenize(&words(text)), text);
        assert_eq!(detokenize::<&str>(&[]), "");
    }
}
