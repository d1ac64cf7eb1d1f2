use editweight_core::metrics::{bleu, fkgl, rouge_l, rouge_l_multi, sari, sari_breakdown, Vacuous};
use editweight_core::text::{tokenize_words, TokenSeq};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

mod support;
use support::sari_oracle;

fn random_tokens(rng: &mut ChaCha8Rng) -> Vec<String> {
    let len = rng.gen_range(0..=6);
    (0..len)
        .map(|_| ["a", "b", "c"][rng.gen_range(0..3)].to_string())
        .collect()
}

#[test]
fn sari_matches_multiset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..200 {
        let src = random_tokens(&mut rng);
        let out = random_tokens(&mut rng);
        let refs: Vec<Vec<String>> = (0..rng.gen_range(1..=3))
            .map(|_| random_tokens(&mut rng))
            .collect();
        let seqs: Vec<TokenSeq> = refs
            .iter()
            .map(|r| TokenSeq::from_tokens(r.iter()))
            .collect();
        let (s, o) = (
            TokenSeq::from_tokens(src.iter()),
            TokenSeq::from_tokens(out.iter()),
        );
        let ours = sari(&s, &o, &seqs).unwrap();
        let oracle = sari_oracle(&src, &out, &refs, true);
        assert!(
            (ours - oracle).abs() < 1e-9,
            "case {k}: {ours} vs {oracle} for {src:?} {out:?} {refs:?}"
        );
        let zero = sari_breakdown(&s, &o, &seqs, Vacuous::Zero).unwrap().score;
        assert!(
            (zero - sari_oracle(&src, &out, &refs, false)).abs() < 1e-9,
            "case {k} (zero convention)"
        );
    }
}

#[derive(Deserialize)]
struct Golden {
    source: String,
    output: String,
    references: Vec<String>,
    sari: f64,
}

fn split(s: &str) -> TokenSeq {
    TokenSeq::from_tokens(s.to_lowercase().split_whitespace())
}

#[test]
fn sari_matches_released_script_values() {
    let cases: Vec<Golden> =
        serde_json::from_str(include_str!("fixtures/sari_golden.json")).unwrap();
    for case in &cases {
        let refs: Vec<TokenSeq> = case.references.iter().map(|r| split(r)).collect();
        let ours = sari_breakdown(
            &split(&case.source),
            &split(&case.output),
            &refs,
            Vacuous::Zero,
        )
        .unwrap()
        .score;
        assert!(
            (ours - case.sari).abs() < 1e-9,
            "{:?}: {ours} vs {}",
            case.output,
            case.sari
        );
    }
}

#[test]
fn copy_and_empty_outputs_score_one_component() {
    let src = split("the physician administered the medication");
    let refs = [split("the doctor gave the medicine")];
    let copy = sari_breakdown(&src, &src, &refs, Vacuous::One).unwrap();
    assert_eq!((copy.delete, copy.add), (0.0, 0.0));
    let empty = sari_breakdown(&src, &TokenSeq::default(), &refs, Vacuous::One).unwrap();
    assert_eq!(empty.add, 0.0);
    assert!(empty.delete > 0.0);
}

#[test]
fn readability_of_empty_text() {
    assert_eq!(fkgl(""), -15.59);
    // Published results give -15.7 for empty outputs.
    assert!((fkgl("") - -15.7).abs() <= 0.2);
}

#[test]
fn fkgl_worked_example() {
    // 2 sentences, 9 words, 11 syllables.
    let text = "The cat sat down. The dog ran away quickly.";
    let expected = 0.39 * (9.0 / 2.0) + 11.8 * (11.0 / 9.0) - 15.59;
    assert!((fkgl(text) - expected).abs() < 1e-12);
}

#[test]
fn identical_output_scores_perfectly() {
    let s = tokenize_words("The doctor gave the patient a new drug for the pain.");
    assert_eq!(rouge_l(&s, &s), 100.0);
    assert_eq!(
        bleu(std::slice::from_ref(&s), &[vec![s.clone()]]).unwrap(),
        100.0
    );
}

fn words() -> impl Strategy<Value = TokenSeq> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..10)
        .prop_map(TokenSeq::from_tokens)
}

proptest! {
    #[test]
    fn metrics_stay_in_range(src in words(), out in words(), refs in prop::collection::vec(words(), 1..4)) {
        let s = sari(&src, &out, &refs).unwrap();
        prop_assert!((0.0..=100.0).contains(&s));
        let r = rouge_l_multi(&out, &refs);
        prop_assert!((0.0..=100.0).contains(&r));
        let b = bleu(std::slice::from_ref(&out), std::slice::from_ref(&refs)).unwrap();
        prop_assert!((0.0..=100.0 + 1e-9).contains(&b));
    }

    #[test]
    fn sari_ignores_reference_order(src in words(), out in words(), mut refs in prop::collection::vec(words(), 1..4)) {
        let before = sari(&src, &out, &refs).unwrap();
        refs.reverse();
        prop_assert_eq!(before, sari(&src, &out, &refs).unwrap());
    }
}
