//! Command-line entry point. Exit codes: 0 success, 1 usage error, 2 data
//! error, 3 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use veritag_core::corpus::{balanced_sample, project_labels, validate_documents, PoliticalFilterModel};
use veritag_core::eval::{
    cross_domain_eval, feature_grid_eval, kfold_cv, temporal_eval, term_frequency_report, EvalConfig,
};
use veritag_core::features::{labeled_matrix, Granularity, PruningMode};
use veritag_core::jobs::Jobs;
use veritag_core::models::{train_pipeline, ClassifierConfig, ClassifierKind, Sample};
use veritag_core::rng::derive_seed;
use veritag_core::selection::{
    aggregate_importance, combine_tree_importances, extra_tree_importance, raw_scores, select_from_scores,
};
use veritag_core::Label;

use crate::config::{Pruning, RunConfig};
use crate::corpus_io::{self, load_manifest, CorpusManifest, ManifestEntry};
use crate::error::{AppError, AppResult, ErrorKind, IoContext};
use crate::formats;
use crate::jobs::RayonJobs;
use crate::model_file;
use crate::resources::load_resources;
use crate::workflow::{document_texts, extract_samples, feature_vectors, resolve_schema, schema_from_config};

#[derive(Debug, Parser)]
#[command(name = "veritag", version, about = "Topic-agnostic reliability classification of news web pages")]
pub struct Cli {
    /// JSON run configuration; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = one per core). Outputs do not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus, or build one from unlabeled pages by site-label projection.
    Ingest(IngestArgs),
    /// Keep only pages the topic classifier scores as political.
    FilterPolitical(FilterArgs),
    /// Cap pages per (site, year) by seeded sampling without replacement.
    Sample(SampleArgs),
    /// Write the TAG feature matrix of a corpus.
    Extract(ExtractArgs),
    /// Score features and keep those with nonzero importance.
    Select(SelectArgs),
    /// Fit a classifier on a feature matrix.
    Train(TrainArgs),
    /// Predict every page of a corpus with a saved model.
    Predict(PredictArgs),
    /// Run an evaluation protocol over a corpus.
    Evaluate(EvaluateArgs),
    /// Most frequent terms per year.
    ReportTerms(TermsArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Corpus directory to validate.
    #[arg(long, required_unless_present = "pages")]
    pub corpus: Option<PathBuf>,
    /// Only validate; print a summary and write nothing.
    #[arg(long)]
    pub check: bool,
    /// Unlabeled page records (JSONL with id, url, site, year, html_path).
    #[arg(long, requires_all = ["site_labels", "out"])]
    pub pages: Option<PathBuf>,
    /// Site label table for projection.
    #[arg(long)]
    pub site_labels: Option<PathBuf>,
    /// Output corpus directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Filter model file; written when --train is given, read otherwise.
    #[arg(long)]
    pub model: PathBuf,
    /// Topic-training corpus (JSONL of {"text", "topic"}).
    #[arg(long)]
    pub train: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Output corpus holding the political pages.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub cap: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GranularityArg {
    H,
    C,
    Hc,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::H => Granularity::H,
            GranularityArg::C => Granularity::C,
            GranularityArg::Hc => Granularity::HC,
        }
    }
}

/// Extraction settings shared by every command that reads pages.
#[derive(Debug, Args)]
pub struct ExtractionFlags {
    #[arg(long, value_enum, ignore_case = true)]
    pub granularity: Option<GranularityArg>,
    /// Feature groups, e.g. L-N-R-W.
    #[arg(long)]
    pub groups: Option<String>,
    /// none, paper or computed:PATH.
    #[arg(long)]
    pub pruning: Option<String>,
    /// LIWC-format category dictionary.
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
    /// rules, perceptron or perceptron:PATH.
    #[arg(long)]
    pub tagger: Option<String>,
    /// Extra ad-network domains (one per line).
    #[arg(long)]
    pub ad_domains: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Schema sidecar; defaults to OUT with extension `.schema.json`.
    #[arg(long)]
    pub schema_out: Option<PathBuf>,
    #[command(flatten)]
    pub extraction: ExtractionFlags,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// Schema of the feature matrix; defaults to the sidecar next to it.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub trees: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reduced schema.
    #[arg(long)]
    pub out: PathBuf,
    /// Importance CSV; defaults to OUT with extension `.importance.csv`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifierFlags {
    #[arg(long)]
    pub classifier: Option<String>,
    /// SVM cost.
    #[arg(long)]
    pub c: Option<f64>,
    /// KNN neighbours.
    #[arg(long)]
    pub k: Option<usize>,
    /// Forest size.
    #[arg(long)]
    pub trees: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Corpus the matrix was extracted from; the content baseline reads its text.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub extraction: ExtractionFlags,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub extraction: ExtractionFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Cv,
    Temporal,
    CrossDomain,
    Grid,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_enum)]
    pub protocol: Protocol,
    #[arg(long)]
    pub corpus: PathBuf,
    /// Test corpus of the cross-domain protocol.
    #[arg(long)]
    pub test_corpus: Option<PathBuf>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[command(flatten)]
    pub classifier: ClassifierFlags,
    #[command(flatten)]
    pub extraction: ExtractionFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TermsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    #[arg(long, default_value_t = 2)]
    pub ngram_max: usize,
    #[arg(long)]
    pub out: PathBuf,
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

fn apply_extraction(cfg: &mut RunConfig, f: &ExtractionFlags) {
    if let Some(g) = f.granularity {
        cfg.granularity = g.into();
    }
    if let Some(g) = &f.groups {
        cfg.groups = g.clone();
    }
    if let Some(p) = &f.pruning {
        cfg.pruning = p.clone();
    }
    if let Some(p) = &f.dictionary {
        cfg.dictionary = Some(p.clone());
    }
    if let Some(t) = &f.tagger {
        cfg.tagger = t.clone();
    }
    if let Some(p) = &f.ad_domains {
        cfg.ad_domains = Some(p.clone());
    }
}

fn apply_classifier(cfg: &mut RunConfig, f: &ClassifierFlags) -> AppResult<()> {
    if let Some(k) = &f.classifier {
        cfg.classifier.kind = k.parse::<ClassifierKind>().map_err(|e| AppError::usage(e.to_string()))?;
    }
    if let Some(c) = f.c {
        cfg.classifier.c = c;
    }
    if let Some(k) = f.k {
        cfg.classifier.k = k;
    }
    if let Some(t) = f.trees {
        cfg.classifier.trees = t;
    }
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    Ok(())
}

fn load_corpus(dir: &Path, cfg: &RunConfig) -> AppResult<CorpusManifest> {
    let m = load_manifest(dir, cfg.year_range)?;
    info!("{}: {} documents", dir.display(), m.entries.len());
    Ok(m)
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json value serializes"));
}

fn label_counts<'a>(labels: impl Iterator<Item = &'a Label>) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for l in labels {
        *out.entry(l.to_string()).or_default() += 1;
    }
    out
}

fn cmd_ingest(cfg: &RunConfig, a: &IngestArgs) -> AppResult<()> {
    if let Some(pages_path) = &a.pages {
        let (site_labels, out) = (a.site_labels.as_ref().expect("clap requires"), a.out.as_ref().expect("clap requires"));
        let labels = corpus_io::load_site_labels(site_labels)?;
        let base = pages_path.parent().unwrap_or(Path::new("."));
        let loaded = corpus_io::load_pages(pages_path, base)?;
        let paths: BTreeMap<String, String> = loaded.iter().map(|(p, h)| (p.id.clone(), h.clone())).collect();
        let (docs, dropped) = project_labels(&labels, loaded.into_iter().map(|(p, _)| p).collect());
        validate_documents(&docs, &labels)?;
        if dropped > 0 {
            warn!("{dropped} pages dropped: site absent from the label table");
        }
        fs::create_dir_all(out).at(out)?;
        let mut entries = Vec::with_capacity(docs.len());
        for d in &docs {
            let rel = paths[&d.id].clone();
            let target = out.join(&rel);
            if let Some(parent) = target.parent() {
                fs::create_dir_all(parent).at(parent)?;
            }
            fs::write(&target, &d.html).at(&target)?;
            entries.push(ManifestEntry {
                id: d.id.clone(),
                url: d.url.clone(),
                site: d.site.clone(),
                label: d.label,
                year: d.year,
                html_path: rel,
            });
        }
        corpus_io::write_manifest(out, &entries)?;
        corpus_io::write_site_labels(out, &labels)?;
        print_json(&serde_json::json!({ "documents": entries.len(), "dropped": dropped }));
        return Ok(());
    }
    let dir = a.corpus.as_ref().expect("clap requires corpus without pages");
    let m = load_corpus(dir, cfg)?;
    let docs = m.load_documents()?;
    let mut years = BTreeMap::<i32, usize>::new();
    for d in &docs {
        *years.entry(d.year).or_default() += 1;
    }
    let sites: std::collections::BTreeSet<&str> = docs.iter().map(|d| d.site.as_str()).collect();
    if !a.check {
        info!("corpus is valid; nothing to write");
    }
    print_json(&serde_json::json!({
        "documents": docs.len(),
        "sites": sites.len(),
        "labels": label_counts(docs.iter().map(|d| &d.label)),
        "years": years.iter().map(|(y, n)| (y.to_string(), *n)).collect::<BTreeMap<_, _>>(),
    }));
    Ok(())
}

fn cmd_filter(cfg: &mut RunConfig, a: &FilterArgs, jobs: &RayonJobs) -> AppResult<()> {
    if let Some(t) = a.threshold {
        cfg.political_threshold = t;
    }
    cfg.validate()?;
    let model = match &a.train {
        Some(topics) => {
            let records = corpus_io::load_topic_corpus(topics)?;
            let pairs: Vec<(&str, &str)> = records.iter().map(|r| (r.text.as_str(), r.topic.as_str())).collect();
            let model = PoliticalFilterModel::train(&pairs)?;
            let text = serde_json::to_string(&model)? + "\n";
            fs::write(&a.model, text).at(&a.model)?;
            info!("filter trained on {} texts, {} topics", records.len(), model.classes.len());
            model
        }
        None => {
            let text = fs::read_to_string(&a.model).at(&a.model)?;
            serde_json::from_str(&text).map_err(|e| AppError::data(format!("{}: {e}", a.model.display())))?
        }
    };
    let Some(dir) = &a.corpus else {
        if a.train.is_none() {
            return Err(AppError::usage("nothing to do: give --corpus, --train, or both"));
        }
        return Ok(());
    };
    let out = a.out.as_ref().ok_or_else(|| AppError::usage("--out is required with --corpus"))?;
    let m = load_corpus(dir, cfg)?;
    let docs = m.load_documents()?;
    let texts = document_texts(&docs, Granularity::HC, jobs);
    let mut keep = Vec::new();
    let mut empty = 0;
    for (e, text) in m.entries.iter().zip(&texts) {
        let d = model.apply(text, cfg.political_threshold)?;
        empty += usize::from(d.empty);
        if d.is_political {
            keep.push(e);
        }
    }
    corpus_io::write_subset(&m, &keep, out)?;
    print_json(&serde_json::json!({
        "documents": docs.len(),
        "political": keep.len(),
        "removed": docs.len() - keep.len(),
        "no_known_terms": empty,
        "threshold": cfg.political_threshold,
    }));
    Ok(())
}

fn cmd_sample(cfg: &mut RunConfig, a: &SampleArgs) -> AppResult<()> {
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let m = load_corpus(&a.corpus, cfg)?;
    let docs = m.load_documents()?;
    let total = docs.len();
    let kept = balanced_sample(docs, a.cap, cfg.seed)?;
    let entries: Vec<&ManifestEntry> = kept.iter().map(|d| m.entry(&d.id).expect("sampled from manifest")).collect();
    corpus_io::write_subset(&m, &entries, &a.out)?;
    print_json(&serde_json::json!({ "documents": total, "sampled": entries.len(), "cap": a.cap, "seed": cfg.seed }));
    Ok(())
}

fn cmd_extract(cfg: &mut RunConfig, a: &ExtractArgs, jobs: &RayonJobs) -> AppResult<()> {
    apply_extraction(cfg, &a.extraction);
    let m = load_corpus(&a.corpus, cfg)?;
    cfg.validate()?;
    let res = load_resources(cfg)?;
    let schema = schema_from_config(cfg, &res)?;
    let samples = extract_samples(&m.load_documents()?, &schema, &res, jobs)?;
    formats::write_features(&a.out, &schema, &feature_vectors(&samples))?;
    let schema_out = a.schema_out.clone().unwrap_or_else(|| sidecar(&a.out, "schema.json"));
    formats::write_schema(&schema_out, &schema)?;
    info!("{}: {} rows, {schema}", a.out.display(), samples.len());
    Ok(())
}

fn read_matrix(features: &Path, schema: Option<&Path>) -> AppResult<(veritag_core::features::FeatureSchema, Vec<veritag_core::features::FeatureVector>)> {
    let schema_path = schema.map(Path::to_path_buf).unwrap_or_else(|| sidecar(features, "schema.json"));
    let schema = formats::read_schema(&schema_path)?;
    let (names, rows) = formats::read_features(features)?;
    if names != schema.names {
        return Err(AppError::data(format!(
            "{}: columns do not match schema {}",
            features.display(),
            schema_path.display()
        )));
    }
    Ok((schema, rows))
}

fn cmd_select(cfg: &mut RunConfig, a: &SelectArgs, jobs: &RayonJobs) -> AppResult<()> {
    if let Some(b) = a.bins {
        cfg.selection.bins = b;
    }
    if let Some(t) = a.trees {
        cfg.selection.trees = t;
    }
    if let Some(l) = a.lambda {
        cfg.selection.lambda = l;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if cfg.selection.trees == 0 || cfg.selection.bins < 2 {
        return Err(AppError::usage("selection needs trees >= 1 and bins >= 2"));
    }
    let (schema, rows) = read_matrix(&a.features, a.schema.as_deref())?;
    let (x, y) = labeled_matrix(&rows, schema.len())?;
    let sel = cfg.selection_config();
    let per_tree = jobs.map(sel.trees, |t| extra_tree_importance(&x, &y, derive_seed(sel.seed, t as u64)));
    let per_tree = per_tree.into_iter().collect::<veritag_core::Result<Vec<_>>>()?;
    let [se, tb, l1, mi] = raw_scores(&x, &y, &sel, Some(combine_tree_importances(&per_tree)))?;
    let (mut reduced, report) = select_from_scores(&schema, aggregate_importance(&se, &tb, &l1, &mi)?)?;
    let report_path = a.report.clone().unwrap_or_else(|| sidecar(&a.out, "importance.csv"));
    reduced.pruning = PruningMode::Computed(report_path.display().to_string());
    formats::write_importance(&report_path, &report)?;
    formats::write_schema(&a.out, &reduced)?;
    info!("kept {} of {} features", reduced.len(), schema.len());
    Ok(())
}

fn cmd_train(cfg: &mut RunConfig, a: &TrainArgs, jobs: &RayonJobs) -> AppResult<()> {
    apply_classifier(cfg, &a.classifier)?;
    apply_extraction(cfg, &a.extraction);
    let (schema, rows) = read_matrix(&a.features, a.schema.as_deref())?;
    let mut texts: BTreeMap<String, String> = BTreeMap::new();
    if cfg.classifier.kind == ClassifierKind::BaselineSvm {
        let dir = a.corpus.as_ref().ok_or_else(|| AppError::usage("baseline-svm needs --corpus for the page text"))?;
        let m = load_corpus(dir, cfg)?;
        let docs = m.load_documents()?;
        for (d, t) in docs.iter().zip(document_texts(&docs, schema.granularity, jobs)) {
            texts.insert(d.id.clone(), t);
        }
    }
    let samples: Vec<Sample> = rows
        .into_iter()
        .map(|r| {
            let text = match cfg.classifier.kind {
                ClassifierKind::BaselineSvm => texts
                    .get(&r.doc_id)
                    .cloned()
                    .ok_or_else(|| AppError::data(format!("document {:?} is not in the corpus", r.doc_id)))?,
                _ => String::new(),
            };
            Ok(Sample { id: r.doc_id, values: r.values, text, label: r.label, year: None })
        })
        .collect::<AppResult<_>>()?;
    let refs: Vec<&Sample> = samples.iter().collect();
    let pipeline = train_pipeline(&refs, &schema, &cfg.classifier, cfg.seed, jobs)?;
    model_file::save(&a.out, &pipeline)?;
    info!("{}: {} model on {} documents", a.out.display(), cfg.classifier.kind, samples.len());
    Ok(())
}

fn cmd_predict(cfg: &mut RunConfig, a: &PredictArgs, jobs: &RayonJobs) -> AppResult<()> {
    apply_extraction(cfg, &a.extraction);
    let pipeline = model_file::load(&a.model)?;
    let m = load_corpus(&a.corpus, cfg)?;
    cfg.validate()?;
    let res = load_resources(cfg)?;
    let schema = pipeline.schema.clone();
    if let Some(n) = schema.names.iter().find(|n| {
        veritag_core::features::FeatureSchema::full(schema.granularity, &schema.groups, &res.dictionary)
            .index_of(n)
            .is_none()
    }) {
        return Err(AppError::data(format!(
            "model feature {n:?} is not produced by the configured resources (dictionary or tagger differ from training)"
        )));
    }
    let samples = extract_samples(&m.load_documents()?, &schema, &res, jobs)?;
    let preds = jobs.map(samples.len(), |i| pipeline.predict_sample(&samples[i]));
    let rows = samples
        .iter()
        .zip(preds)
        .map(|(s, p)| Ok((s.id.clone(), p?)))
        .collect::<veritag_core::Result<Vec<_>>>()?;
    formats::write_predictions(&a.out, &rows)?;
    info!("{}: {} predictions", a.out.display(), rows.len());
    Ok(())
}

fn cmd_evaluate(cfg: &mut RunConfig, a: &EvaluateArgs, jobs: &RayonJobs) -> AppResult<()> {
    apply_classifier(cfg, &a.classifier)?;
    apply_extraction(cfg, &a.extraction);
    if let Some(f) = a.folds {
        cfg.folds = f;
    }
    let m = load_corpus(&a.corpus, cfg)?;
    cfg.validate()?;
    let res = load_resources(cfg)?;
    let eval_cfg = EvalConfig { classifier: cfg.classifier.clone(), folds: cfg.folds, seed: cfg.seed };
    let docs = m.load_documents()?;
    let bytes = match a.protocol {
        Protocol::Cv | Protocol::Temporal | Protocol::CrossDomain => {
            let schema = schema_from_config(cfg, &res)?;
            let samples = extract_samples(&docs, &schema, &res, jobs)?;
            match a.protocol {
                Protocol::Cv => {
                    let report = kfold_cv(&samples, &schema, &eval_cfg, jobs)?;
                    info!("cv mean accuracy {}", report.mean_accuracy);
                    formats::cv_report_csv(&report, &cfg.to_json())?
                }
                Protocol::Temporal => {
                    let report = temporal_eval(&samples, &schema, &eval_cfg, jobs)?;
                    for y in &report.skipped {
                        warn!("train year {y} has a single class; its row is absent");
                    }
                    formats::temporal_report_csv(&report, &cfg.to_json())?
                }
                _ => {
                    let test_dir =
                        a.test_corpus.as_ref().ok_or_else(|| AppError::usage("cross-domain needs --test-corpus"))?;
                    let tm = load_corpus(test_dir, cfg)?;
                    let test = extract_samples(&tm.load_documents()?, &schema, &res, jobs)?;
                    let classifiers = cfg
                        .cross_domain_classifiers
                        .iter()
                        .map(|k| {
                            let kind = k.parse::<ClassifierKind>().map_err(|e| AppError::usage(e.to_string()))?;
                            Ok(ClassifierConfig { kind, ..cfg.classifier.clone() })
                        })
                        .collect::<AppResult<Vec<_>>>()?;
                    let cells = cross_domain_eval(&samples, &test, &schema, &classifiers, cfg.seed, jobs)?;
                    formats::cross_domain_report_csv(&cells, &cfg.to_json())?
                }
            }
        }
        Protocol::Grid => {
            let pruning = cfg.pruning_mode()?;
            if matches!(pruning, Pruning::Computed(_)) {
                return Err(AppError::usage("the grid protocol supports pruning none or paper"));
            }
            let rows = cfg.grid_group_rows()?;
            let mut groups: Vec<_> = rows.iter().flatten().copied().collect();
            groups.sort();
            groups.dedup();
            let mut per_granularity = Vec::new();
            for g in &cfg.grid_granularities {
                let schema = resolve_schema(*g, &groups, &pruning, &res)?;
                let samples = extract_samples(&docs, &schema, &res, jobs)?;
                per_granularity.push((schema, samples));
            }
            let cells = feature_grid_eval(&per_granularity, &rows, &eval_cfg, jobs)?;
            formats::grid_report_csv(&cells, &cfg.to_json())?
        }
    };
    formats::write_report(&a.out, &bytes)
}

fn cmd_terms(cfg: &mut RunConfig, a: &TermsArgs, jobs: &RayonJobs) -> AppResult<()> {
    let m = load_corpus(&a.corpus, cfg)?;
    cfg.validate()?;
    let text_res = crate::resources::load_text_resources(cfg)?;
    let docs = m.load_documents()?;
    let texts = document_texts(&docs, Granularity::HC, jobs);
    let pairs: Vec<(i32, &str)> = docs.iter().zip(&texts).map(|(d, t)| (d.year, t.as_str())).collect();
    let report = term_frequency_report(&pairs, a.top, a.ngram_max, &text_res);
    formats::write_report(&a.out, &formats::terms_report_csv(&report, &cfg.to_json())?)
}

pub fn run(cli: Cli) -> AppResult<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let jobs = RayonJobs::new(cli.jobs.unwrap_or(0))?;
    match &cli.command {
        Command::Ingest(a) => cmd_ingest(&cfg, a),
        Command::FilterPolitical(a) => cmd_filter(&mut cfg, a, &jobs),
        Command::Sample(a) => cmd_sample(&mut cfg, a),
        Command::Extract(a) => cmd_extract(&mut cfg, a, &jobs),
        Command::Select(a) => cmd_select(&mut cfg, a, &jobs),
        Command::Train(a) => cmd_train(&mut cfg, a, &jobs),
        Command::Predict(a) => cmd_predict(&mut cfg, a, &jobs),
        Command::Evaluate(a) => cmd_evaluate(&mut cfg, a, &jobs),
        Command::ReportTerms(a) => cmd_terms(&mut cfg, a, &jobs),
    }
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ErrorKind::Usage.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.kind.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal invariant violated");
            ErrorKind::Internal.exit_code()
        }
    }
}
