//! Adapter for the sentence-aligned PLABA JSON release.
//!
//! The release nests documents under arbitrary keys (question ids, then
//! PubMed ids). A document is any object that has an `abstract` map from
//! sentence id to text and an `adaptations` map from annotator to such a
//! sentence map. Each abstract sentence becomes one pair whose references
//! are the aligned adaptation sentences; sentences no annotator adapted are
//! skipped. An adaptation that exists but is empty is kept as an empty
//! reference, since dropping a sentence is a legitimate simplification.

use anyhow::{bail, Result};
use editweight_core::text::{AlignedPair, Corpus};
use serde_json::{Map, Value};

fn sentence_map(v: &Value) -> Option<&Map<String, Value>> {
    let map = v.as_object()?;
    map.values().all(Value::is_string).then_some(map)
}

fn collect(key: &str, value: &Value, pairs: &mut Vec<AlignedPair>) {
    let Some(obj) = value.as_object() else { return };
    if let (Some(abs), Some(adapt)) = (
        obj.get("abstract").and_then(sentence_map),
        obj.get("adaptations").and_then(Value::as_object),
    ) {
        let adaptations: Vec<&Map<String, Value>> =
            adapt.values().filter_map(sentence_map).collect();
        for (sid, source) in abs {
            let refs: Vec<String> = adaptations
                .iter()
                .filter_map(|a| a.get(sid).and_then(Value::as_str).map(str::to_string))
                .collect();
            if refs.is_empty() {
                continue;
            }
            let source = source.as_str().unwrap_or_default();
            pairs.push(AlignedPair::new(format!("{key}_{sid}"), source, refs));
        }
        return;
    }
    for (k, v) in obj {
        collect(k, v, pairs);
    }
}

pub fn parse_plaba(text: &str) -> Result<Corpus> {
    let root: Value = serde_json::from_str(text)?;
    let mut pairs = Vec::new();
    collect("doc", &root, &mut pairs);
    if pairs.is_empty() {
        bail!("no documents with `abstract` and `adaptations` found");
    }
    Ok(Corpus::new(pairs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_documents_become_pairs() {
        let text = r#"{
            "Q1": {"question": "what?", "111": {
                "abstract": {"1": "A physician examined it.", "2": "Unadapted."},
                "adaptations": {"adaptation1": {"1": "A doctor checked it."}, "adaptation2": {"1": ""}}
            }},
            "Q2": {"222": {"abstract": {"1": "X."}, "adaptations": {"a": {"1": "Y."}}}}
        }"#;
        let corpus = parse_plaba(text).unwrap();
        assert_eq!(corpus.len(), 2);
        let first = &corpus.pairs()[0];
        assert_eq!(first.id, "111_1");
        assert_eq!(
            first.references,
            vec!["A doctor checked it.".to_string(), String::new()]
        );
        assert_eq!(corpus.pairs()[1].id, "222_1");
    }

    #[test]
    fn rejects_files_without_documents() {
        assert!(parse_plaba("{\"a\": 1}").is_err());
        assert!(parse_plaba("not json").is_err());
    }
}
