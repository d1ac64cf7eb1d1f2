//! Command-line interface.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use editweight_core::diff::{edited_target_mask, levenshtein, opcodes, Tag};
use editweight_core::model::config::default_repeat_temperatures;
use editweight_core::model::{
    make_synthetic_corpus, train_with_weights, GenConfig, MetricCritic, ModelConfig, SynthRules,
    TrainConfig, Weighting,
};
use editweight_core::text::{tokenize_words, Corpus};
use editweight_core::weights::{
    corpus_mean_edit_distance, pair_weights, SentenceWeightFn, Shape, PLABA_MEAN_DISTANCE,
};
use serde::{Deserialize, Serialize};

use crate::checkpoint;
use crate::formats::{self, EASY_WORDS_ENV};
use crate::manifest::{file_sha256, sha256_hex, RunManifest};
use crate::pipeline::{self, Repeat, SweepSpec};
use crate::plaba;
use crate::report;

#[derive(Parser, Debug)]
#[command(
    name = "editweight",
    version,
    about = "Edit-weighted training and evaluation for sentence simplification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Edit distances, opcode counts and edit markup for every pair.
    Diff(DiffArgs),
    /// Export sentence- or token-level loss weights as JSONL.
    Weights(WeightsArgs),
    /// Score system outputs against a pair file.
    Eval(EvalArgs),
    /// Train a model and write a checkpoint, loss curve and manifest.
    Train(TrainArgs),
    /// Simplify every source of a pair file with a trained checkpoint.
    Generate(GenerateArgs),
    /// Train and evaluate one model per (λ, seed) on a synthetic corpus.
    Sweep(SweepArgs),
    /// Convert the sentence-aligned PLABA JSON release into a pair file.
    ImportPlaba(ImportArgs),
    /// Write a synthetic pair file.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct DiffArgs {
    /// JSONL pair file.
    #[arg(long)]
    pub pairs: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightMode {
    Sentence,
    Token,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Linear,
    Quadratic,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Linear => Shape::Linear,
            ShapeArg::Quadratic => Shape::Quadratic,
        }
    }
}

/// `--mu`: a positive number or `auto` for the corpus mean distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuArg {
    Auto,
    Value(f64),
}

fn parse_mu(s: &str) -> Result<MuArg, String> {
    if s == "auto" {
        return Ok(MuArg::Auto);
    }
    s.parse::<f64>()
        .map(MuArg::Value)
        .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
}

impl MuArg {
    fn resolve(self, corpus: &Corpus) -> Result<f64> {
        match self {
            MuArg::Value(v) => Ok(v),
            MuArg::Auto => Ok(corpus_mean_edit_distance(corpus)?),
        }
    }
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_enum)]
    pub mode: WeightMode,
    /// Weight of edited target tokens (token mode).
    #[arg(long, default_value_t = 2.5)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "linear")]
    pub shape: ShapeArg,
    /// Mean edit distance where the sentence weight is 1, or `auto`.
    #[arg(long, value_parser = parse_mu, default_value_t = MuArg::Value(PLABA_MEAN_DISTANCE))]
    pub mu: MuArg,
    /// Sentence weight at distance 0.
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl std::fmt::Display for MuArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MuArg::Auto => write!(f, "auto"),
            MuArg::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// JSONL outputs file with `{"id", "text"}` records.
    #[arg(long)]
    pub outputs: PathBuf,
    /// Write the full report (per sentence and corpus) as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write `(edit_distance, sari)` per sentence as CSV.
    #[arg(long)]
    pub scatter: Option<PathBuf>,
    /// Row label in the table.
    #[arg(long, default_value = "system")]
    pub name: String,
    /// Easy-word list, one word per line.
    #[arg(long, env = EASY_WORDS_ENV)]
    pub easy_words: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    None,
    Sentence,
    Token,
    External,
}

impl From<WeightingArg> for Weighting {
    fn from(w: WeightingArg) -> Self {
        match w {
            WeightingArg::None => Weighting::None,
            WeightingArg::Sentence => Weighting::Sentence,
            WeightingArg::Token => Weighting::Token,
            WeightingArg::External => Weighting::External,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Fine-tuning hyperparameters from the original setup.
    Default,
    /// Small model and Adam, sized for the synthetic corpus.
    Desk,
}

/// JSON run configuration; every section and field is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub train: TrainConfig,
    pub generation: GenConfig,
}

impl RunConfig {
    pub fn preset(p: Preset) -> Self {
        match p {
            Preset::Default => RunConfig::default(),
            Preset::Desk => RunConfig {
                model: ModelConfig::desk(),
                train: TrainConfig::desk(),
                generation: GenConfig::default(),
            },
        }
    }

    /// The preset, or the config file when one is given.
    pub fn load(path: Option<&Path>, preset: Preset) -> Result<Self> {
        match path {
            None => Ok(Self::preset(preset)),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("cannot read {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("invalid config {}", p.display()))
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Directory for model.json, loss.csv and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// JSON config with optional `model`, `train` and `generation` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Starting point when no config file is given.
    #[arg(long, value_enum, default_value = "default")]
    pub preset: Preset,
    #[arg(long, value_enum)]
    pub weighting: Option<WeightingArg>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Weight export to train on (implies `--weighting external`).
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Sentence-weight mean distance, or `auto` for the corpus mean.
    #[arg(long, value_parser = parse_mu)]
    pub mu: Option<MuArg>,
    /// Seeds both the initialization and the batch order.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Pair file whose sources are simplified.
    #[arg(long)]
    pub pairs: PathBuf,
    /// JSONL predictions file.
    #[arg(long)]
    pub output: PathBuf,
    /// Manifest path; defaults to the output path with `.manifest.json` appended.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// JSON config; only its `generation` section is used.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub top_p: Option<f64>,
    #[arg(long)]
    pub max_new_tokens: Option<usize>,
    #[arg(long)]
    pub greedy: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draw this many candidates per source and keep the one the critic prefers.
    #[arg(long)]
    pub repeat: Option<usize>,
    /// Temperatures cycled over the repeated candidates.
    #[arg(long, value_delimiter = ',')]
    pub temperatures: Option<Vec<f64>>,
    #[arg(long, env = EASY_WORDS_ENV)]
    pub easy_words: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated λ values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    /// Number of seeds per λ, starting at `--base-seed`.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    #[arg(long, default_value_t = 500)]
    pub train_pairs: usize,
    #[arg(long, default_value_t = 100)]
    pub eval_pairs: usize,
    /// Seed of the synthetic training corpus; the eval corpus uses `corpus_seed + 1`.
    #[arg(long, default_value_t = 1)]
    pub corpus_seed: u64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "desk")]
    pub preset: Preset,
    /// Per-λ summary CSV (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Per-run CSV.
    #[arg(long)]
    pub runs: Option<PathBuf>,
    #[arg(long, env = EASY_WORDS_ENV)]
    pub easy_words: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ImportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 500)]
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Runs `f` against the file at `path`, or stdout.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Word-level edit markup: `[-deleted-]` and `{+inserted+}`.
pub fn edit_markup(source: &str, target: &str) -> String {
    let (s, t) = (tokenize_words(source), tokenize_words(target));
    let mut parts: Vec<String> = Vec::new();
    for op in opcodes(s.tokens(), t.tokens()).iter() {
        let src = s.tokens()[op.src.clone()].join(" ");
        let tgt = t.tokens()[op.tgt.clone()].join(" ");
        match op.tag {
            Tag::Equal => parts.push(tgt),
            Tag::Delete => parts.push(format!("[-{src}-]")),
            Tag::Insert => parts.push(format!("{{+{tgt}+}}")),
            Tag::Replace => parts.push(format!("[-{src}-] {{+{tgt}+}}")),
        }
    }
    parts.join(" ")
}

fn cmd_diff(args: &DiffArgs) -> Result<()> {
    let corpus = formats::read_pairs(&args.pairs)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "id\tdistance\tequal\treplace\tinsert\tdelete\tedited_tokens\tmarkup"
    )?;
    for pair in corpus.iter() {
        let reference = pair.first_reference();
        let (s, t) = (tokenize_words(&pair.source), tokenize_words(reference));
        let align = opcodes(s.tokens(), t.tokens());
        let mut counts = [0usize; 4];
        for op in align.iter() {
            counts[op.tag as usize] += 1;
        }
        let edited = edited_target_mask(&align, t.len())?
            .iter()
            .filter(|&&m| m)
            .count();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            pair.id,
            levenshtein(&pair.source, reference),
            counts[Tag::Equal as usize],
            counts[Tag::Replace as usize],
            counts[Tag::Insert as usize],
            counts[Tag::Delete as usize],
            edited,
            edit_markup(&pair.source, reference)
        )?;
    }
    if !corpus.is_empty() {
        writeln!(
            out,
            "# pairs={} mean_edit_distance={:.2}",
            corpus.len(),
            corpus_mean_edit_distance(&corpus)?
        )?;
    }
    Ok(())
}

fn cmd_weights(args: &WeightsArgs) -> Result<()> {
    let corpus = formats::read_pairs(&args.pairs)?;
    let mu = args.mu.resolve(&corpus)?;
    let f = SentenceWeightFn::new(args.shape.into(), mu, args.offset)?;
    let mode = match args.mode {
        WeightMode::Sentence => Weighting::Sentence,
        WeightMode::Token => Weighting::Token,
    };
    let weights = corpus
        .iter()
        .map(|p| pair_weights(p, mode, args.lambda, &f))
        .collect::<Result<Vec<_>, _>>()?;
    with_output(args.output.as_deref(), |w| {
        formats::write_weights(&weights, w)
    })
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let corpus = formats::read_pairs(&args.pairs)?;
    let outputs = formats::read_outputs(&args.outputs)?;
    let easy = formats::load_easy_words(args.easy_words.as_deref())?;
    let report = editweight_core::metrics::evaluate_corpus(&corpus, &outputs, &easy)?;
    if let Some(p) = &args.report {
        let mut w = create(p)?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    if let Some(p) = &args.scatter {
        report::write_scatter(&report, create(p)?)?;
    }
    print!(
        "{}",
        report::format_table(&[(args.name.clone(), report.corpus.clone())])
    );
    Ok(())
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    let corpus = formats::read_pairs(&args.pairs)?;
    let mut cfg = RunConfig::load(args.config.as_deref(), args.preset)?;
    if let Some(w) = args.weighting {
        cfg.train.weighting = w.into();
    }
    if args.weights.is_some() {
        if args.weighting.is_some_and(|w| w != WeightingArg::External) {
            bail!("--weights requires --weighting external");
        }
        cfg.train.weighting = Weighting::External;
    }
    if let Some(l) = args.lambda {
        cfg.train.lambda = l;
    }
    if let Some(mu) = args.mu {
        let f = cfg.train.sentence_fn;
        cfg.train.sentence_fn = SentenceWeightFn::new(f.shape(), mu.resolve(&corpus)?, f.offset())?;
    }
    if let Some(s) = args.seed {
        cfg.train.seed = s;
        cfg.model.seed = s;
    }
    if let Some(e) = args.epochs {
        cfg.train.epochs = e;
    }
    if let Some(lr) = args.learning_rate {
        cfg.train.learning_rate = lr;
    }
    cfg.model.validate()?;
    cfg.train.validate()?;

    let mut manifest = RunManifest::new("train", cfg.train.seed, formats::corpus_sha256(&corpus));
    let weights = match cfg.train.weighting {
        Weighting::External => {
            let Some(path) = &args.weights else {
                bail!("--weighting external needs --weights <file>");
            };
            manifest.weights_sha256 = Some(file_sha256(path)?);
            formats::align_weights(&corpus, formats::read_weights(path)?)?
        }
        mode => corpus
            .iter()
            .map(|p| pair_weights(p, mode, cfg.train.lambda, &cfg.train.sentence_fn))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let outcome = train_with_weights(&corpus, &weights, &cfg.model, &cfg.train)?;

    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    let ckpt = checkpoint::to_json(&outcome.model)?;
    fs::write(args.out_dir.join("model.json"), &ckpt)?;
    report::write_loss_csv(&outcome.curve, create(&args.out_dir.join("loss.csv"))?)?;
    manifest.model = Some(cfg.model);
    manifest.train = Some(cfg.train);
    manifest.generation = Some(cfg.generation);
    manifest.checkpoint_sha256 = Some(sha256_hex(ckpt.as_bytes()));
    manifest.write(&args.out_dir.join("manifest.json"))?;
    if let Some(last) = outcome.curve.epochs.last() {
        eprintln!(
            "trained {} steps, final epoch loss {last:.4}",
            outcome.curve.steps.len()
        );
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let model = checkpoint::load(&args.checkpoint)?;
    let corpus = formats::read_pairs(&args.pairs)?;
    let mut gcfg = RunConfig::load(args.config.as_deref(), Preset::Default)?.generation;
    if let Some(t) = args.temperature {
        gcfg.temperature = t;
    }
    if let Some(p) = args.top_p {
        gcfg.top_p = p;
    }
    if let Some(n) = args.max_new_tokens {
        gcfg.max_new_tokens = n;
    }
    if let Some(s) = args.seed {
        gcfg.seed = s;
    }
    gcfg.greedy |= args.greedy;
    gcfg.validate()?;

    let repeat = match args.repeat {
        Some(0) => bail!("--repeat must be at least 1"),
        Some(count) => Some(Repeat {
            count,
            temperatures: args
                .temperatures
                .clone()
                .unwrap_or_else(default_repeat_temperatures),
        }),
        None => None,
    };
    if let Some(r) = &repeat {
        for &t in &r.temperatures {
            GenConfig {
                temperature: t,
                ..gcfg.clone()
            }
            .validate()?;
        }
    }
    let critic = MetricCritic {
        easy: formats::load_easy_words(args.easy_words.as_deref())?,
        ..MetricCritic::default()
    };
    let outputs = pipeline::generate_corpus(
        &model,
        &corpus,
        &gcfg,
        repeat
            .as_ref()
            .map(|r| (r, &critic as &dyn editweight_core::model::Critic)),
    );
    formats::write_outputs(
        outputs.iter().map(|(i, t)| (i.as_str(), t.as_str())),
        create(&args.output)?,
    )?;

    let mut manifest = RunManifest::new("generate", gcfg.seed, formats::corpus_sha256(&corpus));
    manifest.generation = Some(gcfg);
    manifest.repeat = repeat.map(|r| (r.count, r.temperatures));
    manifest.checkpoint_sha256 = Some(file_sha256(&args.checkpoint)?);
    let path = args.manifest.clone().unwrap_or_else(|| {
        let mut s = args.output.clone().into_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    });
    manifest.write(&path)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    if args.lambdas.is_empty() {
        bail!("--lambdas needs at least one value");
    }
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let cfg = RunConfig::load(args.config.as_deref(), args.preset)?;
    let rules = SynthRules::default();
    let spec = SweepSpec {
        lambdas: args.lambdas.clone(),
        seeds: (args.base_seed..args.base_seed + args.seeds).collect(),
        weighting: Weighting::Token,
        train_corpus: make_synthetic_corpus(&rules, args.train_pairs, args.corpus_seed)?,
        eval_corpus: make_synthetic_corpus(
            &rules,
            args.eval_pairs,
            args.corpus_seed.wrapping_add(1),
        )?,
        model: cfg.model,
        train: cfg.train,
        generation: cfg.generation,
    };
    let easy = formats::load_easy_words(args.easy_words.as_deref())?;
    let report = pipeline::run_sweep(&spec, &easy, |r| match &r.scores {
        Ok(s) => eprintln!(
            "λ={} seed={}: sari={:.2} fkgl={:.2} edit_distance={:.2}",
            r.lambda, r.seed, s.sari, s.fkgl, s.edit_distance
        ),
        Err(e) => eprintln!("λ={} seed={}: failed: {e}", r.lambda, r.seed),
    })?;
    if let Some(p) = &args.runs {
        pipeline::write_runs_csv(&report, create(p)?)?;
    }
    with_output(args.output.as_deref(), |w| {
        pipeline::write_sweep_csv(&report, w)
    })?;
    let failures: usize = report.rows.iter().map(|r| r.failures).sum();
    if failures > 0 {
        bail!("{failures} run(s) failed");
    }
    Ok(())
}

fn cmd_import(args: &ImportArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let corpus =
        plaba::parse_plaba(&text).with_context(|| format!("in {}", args.input.display()))?;
    with_output(args.output.as_deref(), |w| formats::write_pairs(&corpus, w))?;
    eprintln!("{} pairs", corpus.len());
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let corpus = make_synthetic_corpus(&SynthRules::default(), args.pairs, args.seed)?;
    with_output(args.output.as_deref(), |w| formats::write_pairs(&corpus, w))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Diff(a) => cmd_diff(a),
        Command::Weights(a) => cmd_weights(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Train(a) => cmd_train(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::ImportPlaba(a) => cmd_import(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn markup_shows_edits() {
        assert_eq!(
            edit_markup("the physician helped .", "the doctor helped ."),
            "the [-physician-] {+doctor+} helped ."
        );
        assert_eq!(edit_markup("a b", "a b"), "a b");
        assert_eq!(edit_markup("a b c", "a c d"), "a [-b-] c {+d+}");
    }

    #[test]
    fn mu_parses_auto_and_numbers() {
        assert_eq!(parse_mu("auto"), Ok(MuArg::Auto));
        assert_eq!(parse_mu("12.5"), Ok(MuArg::Value(12.5)));
        assert!(parse_mu("x").is_err());
    }

    #[test]
    fn default_config_carries_fine_tuning_hyperparameters() {
        let cfg = RunConfig::preset(Preset::Default);
        assert_eq!(cfg.train.learning_rate, 5e-5);
        assert_eq!(cfg.train.batch_size, 32);
        assert_eq!(cfg.train.epochs, 3);
        assert_eq!(cfg.generation.temperature, 0.6);
        assert_eq!(cfg.generation.top_p, 0.7);
    }
}
