//! Versioned model files.
//!
//! ```text
//! {
//!   "format_version": 1,
//!   "model_type": "svm" | "knn" | "rf" | "baseline-svm",
//!   "schema_hash": "<16 hex digits>",
//!   "payload": { ...trained pipeline... },
//!   "checksum": "<sha256 hex of the payload bytes as stored>"
//! }
//! ```
//!
//! The payload is the trained pipeline: `schema` (names, granularity,
//! groups, pruning), `schema_hash`, `standardizer` (mean, stddev),
//! `model` (`{"type": ..., "model": ...}`) and `metadata` (classifier
//! settings, seed, crate version). Model bodies:
//!
//! - `svm`: weights, bias, cost
//! - `knn`: k, points, labels
//! - `rf`: trees (node arrays of splits and leaf class counts), n_trees,
//!   max_features, seed, n_features, n_classes
//! - `baseline-svm`: tfidf (vocabulary, idf, min_df), lr_columns, svm

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};
use veritag_core::models::TrainedPipeline;

use crate::error::{AppError, AppResult, IoContext};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<'a> {
    format_version: u32,
    model_type: String,
    schema_hash: String,
    #[serde(borrow)]
    payload: &'a RawValue,
    checksum: String,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn to_bytes(pipeline: &TrainedPipeline) -> AppResult<Vec<u8>> {
    let payload = serde_json::to_string(pipeline)?;
    let raw = RawValue::from_string(payload).map_err(|e| AppError::internal(e.to_string()))?;
    let env = Envelope {
        format_version: FORMAT_VERSION,
        model_type: pipeline.model.kind().as_str().to_string(),
        schema_hash: format!("{:016x}", pipeline.schema_hash),
        checksum: sha256_hex(raw.get().as_bytes()),
        payload: &raw,
    };
    let mut out = serde_json::to_vec(&env)?;
    out.push(b'\n');
    Ok(out)
}

pub fn from_bytes(bytes: &[u8]) -> AppResult<TrainedPipeline> {
    let corrupt = |why: String| AppError::data(format!("checksum error: corrupt model file ({why})"));
    if let Ok(probe) = serde_json::from_slice::<VersionProbe>(bytes) {
        if probe.format_version != FORMAT_VERSION {
            return Err(AppError::data(format!(
                "unsupported model format version {} (this build reads version {FORMAT_VERSION})",
                probe.format_version
            )));
        }
    }
    let env: Envelope = serde_json::from_slice(bytes).map_err(|e| corrupt(e.to_string()))?;
    if sha256_hex(env.payload.get().as_bytes()) != env.checksum {
        return Err(corrupt("payload does not match its sha256".into()));
    }
    let pipeline: TrainedPipeline = serde_json::from_str(env.payload.get()).map_err(|e| corrupt(e.to_string()))?;
    if format!("{:016x}", pipeline.schema_hash) != env.schema_hash || pipeline.model.kind().as_str() != env.model_type {
        return Err(corrupt("envelope does not match payload".into()));
    }
    if pipeline.schema.hash() != pipeline.schema_hash {
        return Err(corrupt("schema hash does not match schema".into()));
    }
    Ok(pipeline)
}

pub fn save(path: &Path, pipeline: &TrainedPipeline) -> AppResult<()> {
    fs::write(path, to_bytes(pipeline)?).at(path)
}

pub fn load(path: &Path) -> AppResult<TrainedPipeline> {
    let bytes = fs::read(path).at(path)?;
    from_bytes(&bytes).map_err(|e| e.context(path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use veritag_core::features::{FeatureSchema, Granularity, Group, PruningMode};
    use veritag_core::jobs::Sequential;
    use veritag_core::models::{train_pipeline, ClassifierConfig, ClassifierKind, Sample};
    use veritag_core::Label;

    fn pipeline(kind: ClassifierKind) -> TrainedPipeline {
        let schema = FeatureSchema {
            names: vec!["R.W".into(), "R.STC".into()],
            granularity: Granularity::C,
            groups: vec![Group::R],
            pruning: PruningMode::None,
        };
        let samples: Vec<Sample> = (0..20)
            .map(|i| Sample {
                id: format!("d{i}"),
                values: vec![i as f64, (i % 3) as f64],
                text: if i < 10 { "calm report today".into() } else { "shocking secret revealed".into() },
                label: Some(if i < 10 { Label::Reliable } else { Label::Unreliable }),
                year: None,
            })
            .collect();
        let refs: Vec<&Sample> = samples.iter().collect();
        let cfg = ClassifierConfig { min_df: 1, ..ClassifierConfig::with_kind(kind) };
        train_pipeline(&refs, &schema, &cfg, 7, &Sequential).unwrap()
    }

    #[test]
    fn round_trip_every_kind() {
        for kind in [ClassifierKind::Svm, ClassifierKind::Knn, ClassifierKind::Rf, ClassifierKind::BaselineSvm] {
            let p = pipeline(kind);
            let back = from_bytes(&to_bytes(&p).unwrap()).unwrap();
            assert_eq!(back, p, "{kind:?}");
        }
    }

    #[test]
    fn truncation_is_a_checksum_error() {
        let bytes = to_bytes(&pipeline(ClassifierKind::Svm)).unwrap();
        let err = from_bytes(&bytes[..bytes.len() / 2]).unwrap_err();
        assert!(err.message.contains("checksum"), "{err}");
    }

    #[test]
    fn tampered_payload_fails_checksum() {
        let text = String::from_utf8(to_bytes(&pipeline(ClassifierKind::Svm)).unwrap()).unwrap();
        let tampered = text.replacen("\"cost\":0.1", "\"cost\":0.2", 1);
        assert_ne!(tampered, text);
        assert!(from_bytes(tampered.as_bytes()).unwrap_err().message.contains("checksum"));
    }

    #[test]
    fn newer_version_is_rejected() {
        let text = String::from_utf8(to_bytes(&pipeline(ClassifierKind::Svm)).unwrap()).unwrap();
        let v2 = text.replacen("\"format_version\":1", "\"format_version\":2", 1);
        let err = from_bytes(v2.as_bytes()).unwrap_err();
        assert!(err.message.contains("version 2"), "{err}");
    }
}
