//! Train → generate → evaluate, shared by the CLI and the sweep driver.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use editweight_core::metrics::{evaluate_corpus, CorpusScores, EasyWordList, EvalReport};
use editweight_core::model::{
    generate, repeated_sample, train, Critic, GenConfig, Model, ModelConfig, TrainConfig, Weighting,
};
use editweight_core::text::Corpus;

use crate::report::mean_std;

/// How many candidates to draw per source and at which temperatures.
#[derive(Clone, Debug, PartialEq)]
pub struct Repeat {
    pub count: usize,
    pub temperatures: Vec<f64>,
}

/// Seed for the `k`-th sentence. Repeated sampling adds the candidate index,
/// so sentences stay on disjoint seeds for up to 65536 candidates.
fn sentence_seed(base: u64, k: usize) -> u64 {
    base.wrapping_add((k as u64) << 16)
}

/// Outputs for every source of `corpus`, in corpus order.
pub fn generate_corpus(
    model: &Model,
    corpus: &Corpus,
    gcfg: &GenConfig,
    repeat: Option<(&Repeat, &dyn Critic)>,
) -> Vec<(String, String)> {
    corpus
        .iter()
        .enumerate()
        .map(|(k, pair)| {
            let cfg = GenConfig {
                seed: sentence_seed(gcfg.seed, k),
                ..gcfg.clone()
            };
            let text = match repeat {
                Some((r, critic)) => {
                    repeated_sample(model, &pair.source, &cfg, r.count, &r.temperatures, critic)
                }
                None => generate(model, &pair.source, &cfg),
            };
            (pair.id.clone(), text)
        })
        .collect()
}

pub fn evaluate_outputs(
    corpus: &Corpus,
    outputs: &[(String, String)],
    easy: &EasyWordList,
) -> Result<EvalReport> {
    let map: BTreeMap<String, String> = outputs.iter().cloned().collect();
    Ok(evaluate_corpus(corpus, &map, easy)?)
}

/// Settings shared by every run of a sweep.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub lambdas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub weighting: Weighting,
    pub train_corpus: Corpus,
    pub eval_corpus: Corpus,
    pub model: ModelConfig,
    pub train: TrainConfig,
    pub generation: GenConfig,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub lambda: f64,
    pub seed: u64,
    pub scores: Result<CorpusScores, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub runs: usize,
    pub failures: usize,
    pub sari: (f64, f64),
    pub fkgl: (f64, f64),
    pub edit_distance: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub runs: Vec<RunResult>,
}

/// Trains with `weighting`/`lambda`, seeding the model, the batch order and
/// the sampler from `seed`, then scores the eval corpus.
pub fn run_once(
    spec: &SweepSpec,
    weighting: Weighting,
    lambda: f64,
    seed: u64,
    easy: &EasyWordList,
) -> Result<EvalReport> {
    let mcfg = ModelConfig {
        seed,
        ..spec.model.clone()
    };
    let tcfg = TrainConfig {
        weighting,
        lambda,
        seed,
        ..spec.train.clone()
    };
    let gcfg = GenConfig {
        seed,
        ..spec.generation.clone()
    };
    let out = train(&spec.train_corpus, &mcfg, &tcfg)?;
    let outputs = generate_corpus(&out.model, &spec.eval_corpus, &gcfg, None);
    evaluate_outputs(&spec.eval_corpus, &outputs, easy)
}

/// One run per `(λ, seed)`. Failed runs are recorded and skipped in the
/// per-λ statistics; `progress` sees every run as it finishes.
pub fn run_sweep(
    spec: &SweepSpec,
    easy: &EasyWordList,
    mut progress: impl FnMut(&RunResult),
) -> Result<SweepReport> {
    if spec.lambdas.is_empty() {
        bail!("the λ list is empty");
    }
    if spec.seeds.is_empty() {
        bail!("the seed list is empty");
    }
    let mut runs = Vec::new();
    let mut rows = Vec::new();
    for &lambda in &spec.lambdas {
        let mut ok: Vec<CorpusScores> = Vec::new();
        for &seed in &spec.seeds {
            let result = RunResult {
                lambda,
                seed,
                scores: run_once(spec, spec.weighting, lambda, seed, easy)
                    .map(|r| r.corpus)
                    .map_err(|e| format!("{e:#}")),
            };
            progress(&result);
            if let Ok(s) = &result.scores {
                ok.push(s.clone());
            }
            runs.push(result);
        }
        let col = |f: fn(&CorpusScores) -> f64| mean_std(&ok.iter().map(f).collect::<Vec<_>>());
        rows.push(SweepRow {
            lambda,
            runs: ok.len(),
            failures: spec.seeds.len() - ok.len(),
            sari: col(|s| s.sari),
            fkgl: col(|s| s.fkgl),
            edit_distance: col(|s| s.edit_distance),
        });
    }
    Ok(SweepReport { rows, runs })
}

pub fn write_sweep_csv(report: &SweepReport, w: impl std::io::Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "lambda",
        "runs",
        "failures",
        "sari_mean",
        "sari_std",
        "fkgl_mean",
        "fkgl_std",
        "edit_distance_mean",
        "edit_distance_std",
    ])?;
    for r in &report.rows {
        csv.write_record([
            r.lambda.to_string(),
            r.runs.to_string(),
            r.failures.to_string(),
            r.sari.0.to_string(),
            r.sari.1.to_string(),
            r.fkgl.0.to_string(),
            r.fkgl.1.to_string(),
            r.edit_distance.0.to_string(),
            r.edit_distance.1.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_runs_csv(report: &SweepReport, w: impl std::io::Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["lambda", "seed", "sari", "fkgl", "edit_distance", "error"])?;
    for r in &report.runs {
        let (sari, fkgl, ed, err) = match &r.scores {
            Ok(s) => (
                s.sari.to_string(),
                s.fkgl.to_string(),
                s.edit_distance.to_string(),
                String::new(),
            ),
            Err(e) => (String::new(), String::new(), String::new(), e.clone()),
        };
        csv.write_record([
            r.lambda.to_string(),
            r.seed.to_string(),
            sari,
            fkgl,
            ed,
            err,
        ])?;
    }
    csv.flush()?;
    Ok(())
}
