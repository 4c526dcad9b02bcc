//! Evaluation protocols: stratified k-fold cross-validation, the
//! train-on-one-year temporal matrix, cross-domain transfer, the
//! groups × granularity grid, and per-year term frequencies.
//!
//! Every protocol fits scaling (and the baseline vocabulary) on training
//! documents only.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureSchema, Granularity, Group};
use crate::jobs::{Jobs, Sequential};
use crate::models::{train_pipeline, ClassifierConfig, ClassifierKind, Sample};
use crate::rng::{derive_seed, from_seed};
use crate::text::{tokenize, TextResources};

pub const DEFAULT_FOLDS: usize = 5;

pub fn accuracy(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::EmptyInput("predictions"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::LengthMismatch { expected: labels.len(), actual: predictions.len() });
    }
    let hits = predictions.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / predictions.len() as f64)
}

/// Fold id per document. Each class is shuffled with its own derived seed
/// and dealt round-robin, the dealing position carrying over from one
/// class to the next, so fold sizes differ by at most one and every
/// fold's class counts are within one of proportional.
pub fn stratified_folds(y: &[usize], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if k > y.len() {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds {} documents", y.len())));
    }
    let classes: BTreeSet<usize> = y.iter().copied().collect();
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let mut folds = alloc::vec![0; y.len()];
    let mut next = 0;
    for c in classes {
        let mut members: Vec<usize> = (0..y.len()).filter(|i| y[*i] == c).collect();
        members.shuffle(&mut from_seed(derive_seed(seed, c as u64)));
        for i in members {
            folds[i] = next % k;
            next += 1;
        }
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub classifier: ClassifierConfig,
    pub folds: usize,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { classifier: ClassifierConfig::default(), folds: DEFAULT_FOLDS, seed: 0 }
    }
}

/// The settings a report was produced under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub groups: Vec<Group>,
    pub granularity: Granularity,
    pub classifier: ClassifierKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub config: ConfigEcho,
}

fn labels(samples: &[Sample]) -> Result<Vec<usize>> {
    samples
        .iter()
        .map(|s| {
            s.label
                .map(|l| l.id())
                .ok_or_else(|| Error::Malformed(format!("document {:?} has no label", s.id)))
        })
        .collect()
}

fn echo(schema: &FeatureSchema, config: &EvalConfig) -> ConfigEcho {
    ConfigEcho {
        groups: schema.groups.clone(),
        granularity: schema.granularity,
        classifier: config.classifier.kind,
        seed: config.seed,
    }
}

fn fit_and_score(train: &[&Sample], test: &[&Sample], schema: &FeatureSchema, classifier: &ClassifierConfig, seed: u64) -> Result<f64> {
    let p = train_pipeline(train, schema, classifier, seed, &Sequential)?;
    let mut pred = Vec::with_capacity(test.len());
    let mut gold = Vec::with_capacity(test.len());
    for s in test {
        pred.push(p.predict_sample(s)?.class);
        gold.push(s.label.map_or(usize::MAX, |l| l.id()));
    }
    accuracy(&pred, &gold)
}

/// Stratified k-fold CV; folds run through `jobs`.
pub fn kfold_cv(samples: &[Sample], schema: &FeatureSchema, config: &EvalConfig, jobs: &impl Jobs) -> Result<EvalReport> {
    let y = labels(samples)?;
    let folds = stratified_folds(&y, config.folds, config.seed)?;
    let results = jobs.map(config.folds, |f| {
        let train: Vec<&Sample> = samples.iter().zip(&folds).filter(|(_, g)| **g != f).map(|(s, _)| s).collect();
        let test: Vec<&Sample> = samples.iter().zip(&folds).filter(|(_, g)| **g == f).map(|(s, _)| s).collect();
        fit_and_score(&train, &test, schema, &config.classifier, derive_seed(config.seed, f as u64))
    });
    let fold_accuracies = results.into_iter().collect::<Result<Vec<f64>>>()?;
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    Ok(EvalReport { protocol: "cv".into(), fold_accuracies, mean_accuracy, config: echo(schema, config) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalCell {
    pub train_year: i32,
    pub test_year: i32,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalReport {
    pub years: Vec<i32>,
    /// Filled off-diagonal cells in (train_year, test_year) order.
    pub cells: Vec<TemporalCell>,
    /// Per train year: mean over its cells (absent if the year was skipped).
    pub means: Vec<(i32, Option<f64>)>,
    /// Train years with a single class.
    pub skipped: Vec<i32>,
    pub config: ConfigEcho,
}

impl TemporalReport {
    pub fn get(&self, train_year: i32, test_year: i32) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.train_year == train_year && c.test_year == test_year)
            .map(|c| c.accuracy)
    }
}

/// Train on each single year, test on every other year separately.
pub fn temporal_eval(samples: &[Sample], schema: &FeatureSchema, config: &EvalConfig, jobs: &impl Jobs) -> Result<TemporalReport> {
    labels(samples)?;
    let mut by_year: BTreeMap<i32, Vec<&Sample>> = BTreeMap::new();
    for s in samples {
        let year = s.year.ok_or_else(|| Error::Malformed(format!("document {:?} has no year", s.id)))?;
        by_year.entry(year).or_default().push(s);
    }
    if by_year.len() < 2 {
        return Err(Error::InvalidParameter(format!("temporal evaluation needs at least 2 years, found {}", by_year.len())));
    }
    let years: Vec<i32> = by_year.keys().copied().collect();
    let single_class = |y: i32| by_year[&y].iter().map(|s| s.label).collect::<BTreeSet<_>>().len() < 2;
    let skipped: Vec<i32> = years.iter().copied().filter(|y| single_class(*y)).collect();

    let pairs: Vec<(i32, i32)> = years
        .iter()
        .filter(|y| !skipped.contains(y))
        .flat_map(|a| years.iter().filter(move |b| *b != a).map(move |b| (*a, *b)))
        .collect();
    let results = jobs.map(pairs.len(), |i| {
        let (a, b) = pairs[i];
        fit_and_score(&by_year[&a], &by_year[&b], schema, &config.classifier, derive_seed(config.seed, a as u64))
    });
    let mut cells = Vec::with_capacity(pairs.len());
    for ((train_year, test_year), acc) in pairs.iter().zip(results) {
        cells.push(TemporalCell { train_year: *train_year, test_year: *test_year, accuracy: acc? });
    }
    let means = years
        .iter()
        .map(|y| {
            let row: Vec<f64> = cells.iter().filter(|c| c.train_year == *y).map(|c| c.accuracy).collect();
            (*y, (!row.is_empty()).then(|| row.iter().sum::<f64>() / row.len() as f64))
        })
        .collect();
    Ok(TemporalReport { years, cells, means, skipped, config: echo(schema, config) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossDomainCell {
    pub classifier: ClassifierKind,
    pub accuracy: f64,
}

/// Fit each classifier on the whole training corpus and score it on the
/// whole test corpus.
pub fn cross_domain_eval(
    train: &[Sample],
    test: &[Sample],
    schema: &FeatureSchema,
    classifiers: &[ClassifierConfig],
    seed: u64,
    jobs: &impl Jobs,
) -> Result<Vec<CrossDomainCell>> {
    labels(train)?;
    labels(test)?;
    if test.is_empty() {
        return Err(Error::EmptyInput("test corpus"));
    }
    let train_refs: Vec<&Sample> = train.iter().collect();
    let test_refs: Vec<&Sample> = test.iter().collect();
    let results = jobs.map(classifiers.len(), |i| {
        fit_and_score(&train_refs, &test_refs, schema, &classifiers[i], seed)
    });
    classifiers
        .iter()
        .zip(results)
        .map(|(c, acc)| Ok(CrossDomainCell { classifier: c.kind, accuracy: acc? }))
        .collect()
}

/// Restrict samples and schema to the features of `groups`.
pub fn project_groups(schema: &FeatureSchema, samples: &[Sample], groups: &[Group]) -> (FeatureSchema, Vec<Sample>) {
    let keep: Vec<usize> = schema
        .names
        .iter()
        .enumerate()
        .filter(|(_, n)| Group::of_feature(n).is_some_and(|g| groups.contains(&g)))
        .map(|(i, _)| i)
        .collect();
    let mut sub = schema.retain(|i, _| keep.contains(&i));
    let mut g = groups.to_vec();
    g.sort();
    g.dedup();
    sub.groups = g;
    let projected = samples
        .iter()
        .map(|s| Sample { values: keep.iter().map(|i| s.values[*i]).collect(), ..s.clone() })
        .collect();
    (sub, projected)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub groups: Vec<Group>,
    pub granularity: Granularity,
    pub report: EvalReport,
}

/// `per_granularity` holds, for each granularity, a schema covering all
/// requested groups and the samples extracted under it. One k-fold run per
/// (row, granularity) cell, all with the same folds.
pub fn feature_grid_eval(
    per_granularity: &[(FeatureSchema, Vec<Sample>)],
    rows: &[Vec<Group>],
    config: &EvalConfig,
    jobs: &impl Jobs,
) -> Result<Vec<GridCell>> {
    let cells: Vec<(usize, usize)> =
        (0..rows.len()).flat_map(|r| (0..per_granularity.len()).map(move |g| (r, g))).collect();
    let results = jobs.map(cells.len(), |i| {
        let (r, g) = cells[i];
        let (schema, samples) = &per_granularity[g];
        let (sub, projected) = project_groups(schema, samples, &rows[r]);
        if sub.is_empty() {
            return Err(Error::InvalidParameter(format!("no features for groups {:?}", rows[r])));
        }
        kfold_cv(&projected, &sub, config, &Sequential)
    });
    cells
        .iter()
        .zip(results)
        .map(|((r, g), report)| {
            Ok(GridCell { groups: rows[*r].clone(), granularity: per_granularity[*g].0.granularity, report: report? })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearTerms {
    pub year: i32,
    /// Count-descending, ties in lexicographic order.
    pub terms: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFrequencyReport {
    pub years: Vec<YearTerms>,
}

/// Top `n_top` lowercased, stopword-free unigrams (and, with
/// `ngram_max >= 2`, bigrams of adjacent non-stopword tokens within a
/// sentence) per year.
pub fn term_frequency_report(docs: &[(i32, &str)], n_top: usize, ngram_max: usize, resources: &TextResources) -> TermFrequencyReport {
    let mut per_year: BTreeMap<i32, BTreeMap<String, usize>> = BTreeMap::new();
    for (year, text) in docs {
        let counts = per_year.entry(*year).or_default();
        let tok = tokenize(text);
        for sentence in tok.sentence_tokens() {
            let lower: Vec<String> = sentence.iter().map(|t| t.to_lowercase()).collect();
            for (i, w) in lower.iter().enumerate() {
                if resources.is_stopword(w) {
                    continue;
                }
                *counts.entry(w.clone()).or_default() += 1;
                if ngram_max >= 2 {
                    if let Some(next) = lower.get(i + 1).filter(|n| !resources.is_stopword(n)) {
                        *counts.entry(format!("{w} {next}")).or_default() += 1;
                    }
                }
            }
        }
    }
    let years = per_year
        .into_iter()
        .map(|(year, counts)| {
            let mut terms: Vec<(String, usize)> = counts.into_iter().collect();
            terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            terms.truncate(n_top);
            YearTerms { year, terms }
        })
        .collect();
    TermFrequencyReport { years }
}

impl ConfigEcho {
    pub fn groups_label(&self) -> String {
        self.groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("-")
    }
}
