//! Corpus-level steps shared by the subcommands: schema resolution,
//! document-parallel extraction, and training/prediction over a corpus.

use log::{info, warn};
use veritag_core::corpus::RawDocument;
use veritag_core::features::{
    apply_paper_pruning, extract_tag_features, granularity_text, ExtractionResources, FeatureSchema, FeatureVector,
    Granularity, Group, PruningMode,
};
use veritag_core::html::Document;
use veritag_core::jobs::Jobs;
use veritag_core::markup::{extract_article, Article};
use veritag_core::models::Sample;

use crate::config::{Pruning, RunConfig};
use crate::error::{AppError, AppResult};
use crate::formats::read_schema;

/// The schema a run extracts: the full feature set for the configured
/// groups and granularity, reduced by the pruning mode.
pub fn resolve_schema(
    granularity: Granularity,
    groups: &[Group],
    pruning: &Pruning,
    res: &ExtractionResources,
) -> AppResult<FeatureSchema> {
    let full = FeatureSchema::full(granularity, groups, &res.dictionary);
    let schema = match pruning {
        Pruning::None => full,
        Pruning::Paper => {
            let out = apply_paper_pruning(&full);
            if !out.missing.is_empty() {
                warn!("pruning list entries not in the schema: {}", out.missing.join(", "));
            }
            info!("published pruning lists removed {} features", out.removed.len());
            out.schema
        }
        Pruning::Computed(path) => {
            let selected = read_schema(path)?;
            if selected.granularity != granularity {
                return Err(AppError::usage(format!(
                    "{}: selected schema is for granularity {}, run uses {}",
                    path.display(),
                    selected.granularity,
                    granularity
                )));
            }
            if let Some(n) = selected.names.iter().find(|n| full.index_of(n).is_none()) {
                return Err(AppError::data(format!("{}: feature {n:?} is not produced by this configuration", path.display())));
            }
            FeatureSchema { pruning: PruningMode::Computed(path.display().to_string()), ..selected }
        }
    };
    if schema.is_empty() {
        return Err(AppError::usage("the configured groups and pruning leave no features"));
    }
    Ok(schema)
}

pub fn schema_from_config(cfg: &RunConfig, res: &ExtractionResources) -> AppResult<FeatureSchema> {
    resolve_schema(cfg.granularity, &cfg.group_list()?, &cfg.pruning_mode()?, res)
}

fn parse_page(doc: &RawDocument) -> (Document, Article) {
    let tree = Document::parse(&doc.html);
    let article = extract_article(&tree);
    (tree, article)
}

/// Extract every document in parallel; output keeps input order.
pub fn extract_samples(
    docs: &[RawDocument],
    schema: &FeatureSchema,
    res: &ExtractionResources,
    jobs: &impl Jobs,
) -> AppResult<Vec<Sample>> {
    let results = jobs.map(docs.len(), |i| {
        let d = &docs[i];
        let (tree, article) = parse_page(d);
        let values = extract_tag_features(&article, &tree, schema, res)?;
        Ok(Sample {
            id: d.id.clone(),
            values,
            text: granularity_text(&article, schema.granularity),
            label: Some(d.label),
            year: Some(d.year),
        })
    });
    results.into_iter().collect::<veritag_core::Result<Vec<_>>>().map_err(AppError::from)
}

/// The text of every document at a granularity, for the text-only steps.
pub fn document_texts(docs: &[RawDocument], granularity: Granularity, jobs: &impl Jobs) -> Vec<String> {
    jobs.map(docs.len(), |i| granularity_text(&parse_page(&docs[i]).1, granularity))
}

pub fn feature_vectors(samples: &[Sample]) -> Vec<FeatureVector> {
    samples
        .iter()
        .map(|s| FeatureVector { doc_id: s.id.clone(), values: s.values.clone(), label: s.label })
        .collect()
}
