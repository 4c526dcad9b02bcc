use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    check_binary, knn_train, rf_from_trees, rf_train_tree, svm_train_sparse, ClassifierConfig, ClassifierKind,
    KnnModel, LinearSvmModel, Prediction, RandomForestModel, SparseVec, TfidfVectorizer,
};
use crate::error::{Error, Result};
use crate::features::{FeatureSchema, Group, Standardizer};
use crate::jobs::Jobs;
use crate::label::Label;
use crate::rng::derive_seed;

/// One document as the learners see it: TAG values aligned to a schema,
/// plus the text the content baseline reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub values: Vec<f64>,
    pub text: String,
    pub label: Option<Label>,
    pub year: Option<i32>,
}

/// TF-IDF block followed by the standardized L and R columns, fed to a
/// linear SVM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub tfidf: TfidfVectorizer,
    /// Schema columns (L and R groups) appended after the TF-IDF block.
    pub lr_columns: Vec<usize>,
    pub svm: LinearSvmModel,
}

impl BaselineModel {
    pub fn row(tfidf: &TfidfVectorizer, text: &str, lr_standardized: &[f64]) -> SparseVec {
        let mut row = tfidf.transform(text);
        row.extend_dense(tfidf.len(), lr_standardized);
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "model", rename_all = "kebab-case")]
pub enum Model {
    Svm(LinearSvmModel),
    Knn(KnnModel),
    Rf(RandomForestModel),
    BaselineSvm(BaselineModel),
}

impl Model {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::Svm(_) => ClassifierKind::Svm,
            Model::Knn(_) => ClassifierKind::Knn,
            Model::Rf(_) => ClassifierKind::Rf,
            Model::BaselineSvm(_) => ClassifierKind::BaselineSvm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineMetadata {
    pub classifier: ClassifierConfig,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedPipeline {
    pub schema: FeatureSchema,
    pub schema_hash: u64,
    /// Fitted on all schema columns (TAG models) or on the L/R columns
    /// (baseline).
    pub standardizer: Standardizer,
    pub model: Model,
    pub metadata: PipelineMetadata,
}

fn labels_of(samples: &[&Sample]) -> Result<Vec<usize>> {
    samples
        .iter()
        .map(|s| {
            s.label
                .map(Label::id)
                .ok_or_else(|| Error::Malformed(alloc::format!("document {:?} has no label", s.id)))
        })
        .collect()
}

/// Fit scaling and the configured classifier on `samples` (training data
/// only). Forest trees run through `jobs`.
pub fn train_pipeline(
    samples: &[&Sample],
    schema: &FeatureSchema,
    config: &ClassifierConfig,
    seed: u64,
    jobs: &impl Jobs,
) -> Result<TrainedPipeline> {
    let y = labels_of(samples)?;
    check_binary(samples.len(), &y)?;
    if let Some(s) = samples.iter().find(|s| s.values.len() != schema.len()) {
        return Err(Error::DimensionMismatch { expected: schema.len(), actual: s.values.len() });
    }
    let raw: Vec<Vec<f64>> = samples.iter().map(|s| s.values.clone()).collect();

    let (standardizer, model) = match config.kind {
        ClassifierKind::BaselineSvm => {
            let lr_columns: Vec<usize> = schema
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| matches!(Group::of_feature(n), Some(Group::L | Group::R)))
                .map(|(i, _)| i)
                .collect();
            let lr: Vec<Vec<f64>> = raw.iter().map(|r| lr_columns.iter().map(|j| r[*j]).collect()).collect();
            let standardizer = Standardizer::fit(&lr)?;
            let texts: Vec<&str> = samples.iter().map(|s| s.text.as_str()).collect();
            let tfidf = TfidfVectorizer::fit(&texts, config.min_df)?;
            let rows = texts
                .iter()
                .zip(&lr)
                .map(|(t, v)| Ok(BaselineModel::row(&tfidf, t, &standardizer.apply(v)?)))
                .collect::<Result<Vec<_>>>()?;
            let dim = tfidf.len() + lr_columns.len();
            let (svm, _) = svm_train_sparse(&rows, dim, &y, config.c)?;
            (standardizer, Model::BaselineSvm(BaselineModel { tfidf, lr_columns, svm }))
        }
        kind => {
            let standardizer = Standardizer::fit(&raw)?;
            let x = standardizer.apply_all(&raw)?;
            let model = match kind {
                ClassifierKind::Svm => {
                    let rows: Vec<SparseVec> = x.iter().map(|r| SparseVec::from_dense(r)).collect();
                    Model::Svm(svm_train_sparse(&rows, schema.len(), &y, config.c)?.0)
                }
                ClassifierKind::Knn => Model::Knn(knn_train(&x, &y, config.k)?),
                _ => {
                    if config.trees == 0 {
                        return Err(Error::InvalidParameter("trees must be at least 1".into()));
                    }
                    let trees = jobs.map(config.trees, |t| rf_train_tree(&x, &y, 2, derive_seed(seed, t as u64)));
                    Model::Rf(rf_from_trees(trees, schema.len(), seed))
                }
            };
            (standardizer, model)
        }
    };
    Ok(TrainedPipeline {
        schema: schema.clone(),
        schema_hash: schema.hash(),
        standardizer,
        model,
        metadata: PipelineMetadata { classifier: *config, seed, version: env!("CARGO_PKG_VERSION").to_string() },
    })
}

impl TrainedPipeline {
    /// Refuse inputs extracted under a different feature layout.
    pub fn check_schema(&self, schema: &FeatureSchema) -> Result<()> {
        let actual = schema.hash();
        if actual != self.schema_hash {
            return Err(Error::SchemaMismatch { expected: self.schema_hash, actual });
        }
        Ok(())
    }

    /// `values` aligned to [`Self::schema`]; `text` is only read by the
    /// baseline.
    pub fn predict(&self, values: &[f64], text: &str) -> Result<Prediction> {
        if values.len() != self.schema.len() {
            return Err(Error::DimensionMismatch { expected: self.schema.len(), actual: values.len() });
        }
        match &self.model {
            Model::BaselineSvm(b) => {
                let lr: Vec<f64> = b.lr_columns.iter().map(|j| values[*j]).collect();
                let row = BaselineModel::row(&b.tfidf, text, &self.standardizer.apply(&lr)?);
                let m = b.svm.decision_sparse(&row);
                Ok(Prediction { class: usize::from(m > 0.0), score: m })
            }
            model => {
                let x = self.standardizer.apply(values)?;
                match model {
                    Model::Svm(m) => m.predict(&x),
                    Model::Knn(m) => m.predict(&x),
                    Model::Rf(m) => m.predict(&x),
                    Model::BaselineSvm(_) => unreachable!(),
                }
            }
        }
    }

    pub fn predict_sample(&self, sample: &Sample) -> Result<Prediction> {
        self.predict(&sample.values, &sample.text)
    }
}
