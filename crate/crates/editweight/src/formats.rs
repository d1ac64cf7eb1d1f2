//! JSONL file formats: aligned pairs, system outputs and weight exports.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use editweight_core::metrics::EasyWordList;
use editweight_core::text::{AlignedPair, Corpus};
use editweight_core::weights::PairWeights;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable naming the default easy-word list file.
pub const EASY_WORDS_ENV: &str = "EDITWEIGHT_EASY_WORDS";

/// One line of a pair file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFileRecord {
    pub id: String,
    pub source: String,
    pub references: Vec<String>,
}

impl From<&AlignedPair> for PairFileRecord {
    fn from(p: &AlignedPair) -> Self {
        PairFileRecord {
            id: p.id.clone(),
            source: p.source.clone(),
            references: p.references.clone(),
        }
    }
}

/// One line of an outputs file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub id: String,
    pub text: String,
}

/// Parses non-blank lines as JSON records; errors name the 1-based line.
fn parse_jsonl<T: DeserializeOwned>(reader: impl BufRead, what: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line.with_context(|| format!("{what}: reading line {}", k + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .with_context(|| format!("{what}: malformed record on line {}", k + 1))?;
        out.push(rec);
    }
    Ok(out)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn write_jsonl<T: Serialize>(
    records: impl IntoIterator<Item = T>,
    mut w: impl Write,
) -> Result<()> {
    for rec in records {
        serde_json::to_writer(&mut w, &rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_pairs(reader: impl BufRead) -> Result<Corpus> {
    let records: Vec<PairFileRecord> = parse_jsonl(reader, "pair file")?;
    let mut pairs = Vec::with_capacity(records.len());
    for r in records {
        if r.references.is_empty() {
            bail!("pair file: pair `{}` has no references", r.id);
        }
        pairs.push(AlignedPair::new(r.id, r.source, r.references));
    }
    Ok(Corpus::new(pairs)?)
}

pub fn read_pairs(path: &Path) -> Result<Corpus> {
    parse_pairs(open(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn write_pairs(corpus: &Corpus, w: impl Write) -> Result<()> {
    write_jsonl(corpus.iter().map(PairFileRecord::from), w)
}

pub fn parse_outputs(reader: impl BufRead) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for r in parse_jsonl::<OutputRecord>(reader, "outputs file")? {
        if map.insert(r.id.clone(), r.text).is_some() {
            bail!("outputs file: duplicate id `{}`", r.id);
        }
    }
    Ok(map)
}

pub fn read_outputs(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_outputs(open(path)?).with_context(|| format!("in {}", path.display()))
}

/// Writes outputs in the given order.
pub fn write_outputs<'a>(
    outputs: impl IntoIterator<Item = (&'a str, &'a str)>,
    w: impl Write,
) -> Result<()> {
    write_jsonl(
        outputs.into_iter().map(|(id, text)| OutputRecord {
            id: id.to_string(),
            text: text.to_string(),
        }),
        w,
    )
}

pub fn parse_weights(reader: impl BufRead) -> Result<Vec<PairWeights>> {
    parse_jsonl(reader, "weights file")
}

pub fn read_weights(path: &Path) -> Result<Vec<PairWeights>> {
    parse_weights(open(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn write_weights(weights: &[PairWeights], w: impl Write) -> Result<()> {
    write_jsonl(weights, w)
}

/// Orders `weights` to match the corpus, failing on missing or unknown ids.
pub fn align_weights(corpus: &Corpus, weights: Vec<PairWeights>) -> Result<Vec<PairWeights>> {
    let mut by_id: BTreeMap<String, PairWeights> = BTreeMap::new();
    for w in weights {
        if by_id.contains_key(&w.id) {
            bail!("weights file: duplicate id `{}`", w.id);
        }
        by_id.insert(w.id.clone(), w);
    }
    let mut out = Vec::with_capacity(corpus.len());
    for p in corpus.iter() {
        match by_id.remove(&p.id) {
            Some(w) => out.push(w),
            None => bail!("weights file: no entry for pair `{}`", p.id),
        }
    }
    if let Some(extra) = by_id.keys().next() {
        bail!("weights file: id `{extra}` is not in the pair file");
    }
    Ok(out)
}

/// SHA-256 over the canonical JSONL serialization of the corpus.
pub fn corpus_sha256(corpus: &Corpus) -> String {
    let mut buf = Vec::new();
    write_pairs(corpus, &mut buf).expect("writing to memory");
    Sha256::digest(&buf)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Easy-word list from `path`, else from the file named by
/// [`EASY_WORDS_ENV`], else the bundled Dale-Chall list.
pub fn load_easy_words(path: Option<&Path>) -> Result<EasyWordList> {
    let from_env = std::env::var_os(EASY_WORDS_ENV).map(std::path::PathBuf::from);
    match path.map(Path::to_path_buf).or(from_env) {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("cannot read easy-word list {}", p.display()))?;
            Ok(EasyWordList::parse(&text)?)
        }
        None => Ok(EasyWordList::dale_chall()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_line_is_named() {
        let text = "{\"id\":\"a\",\"source\":\"x\",\"references\":[\"y\"]}\n\nnot json\n";
        let err = format!("{:#}", parse_pairs(text.as_bytes()).unwrap_err());
        assert!(err.contains("line 3"), "{err}");
    }

    #[test]
    fn empty_references_rejected() {
        let text = "{\"id\":\"a\",\"source\":\"x\",\"references\":[]}\n";
        assert!(parse_pairs(text.as_bytes()).is_err());
    }

    #[test]
    fn pairs_round_trip() {
        let text = "{\"id\":\"a\",\"source\":\"x y\",\"references\":[\"y\",\"z\"]}\n";
        let corpus = parse_pairs(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_pairs(&corpus, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn weights_round_trip_exactly() {
        let w = vec![PairWeights {
            id: "p".into(),
            sentence: 0.1 + 0.2,
            tokens: vec![1.0, 2.5, 1.0 / 3.0],
        }];
        let mut buf = Vec::new();
        write_weights(&w, &mut buf).unwrap();
        assert_eq!(parse_weights(buf.as_slice()).unwrap(), w);
    }

    #[test]
    fn duplicate_outputs_rejected() {
        let text = "{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n";
        assert!(parse_outputs(text.as_bytes()).is_err());
    }
}
