//! The single JSON run configuration. Unknown keys are rejected; command
//! line flags override file values.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use veritag_core::features::{parse_groups, Granularity, Group};
use veritag_core::models::ClassifierConfig;
use veritag_core::selection::SelectionConfig;

use crate::error::{AppError, AppResult, IoContext};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub granularity: Granularity,
    /// Group list such as `"L-N-R-W"`.
    pub groups: String,
    /// `none`, `paper`, or `computed:PATH` (a schema file from `select`).
    pub pruning: String,
    pub classifier: ClassifierConfig,
    pub folds: usize,
    /// Dictionary file; the bundled demo dictionary when absent.
    pub dictionary: Option<PathBuf>,
    /// `rules`, `perceptron` (bundled training data) or `perceptron:PATH`.
    pub tagger: String,
    /// Extra ad-network domains, added to the bundled list.
    pub ad_domains: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub easy_words: Option<PathBuf>,
    pub abbreviations: Option<PathBuf>,
    pub political_threshold: f64,
    pub selection: SelectionSettings,
    /// Rows of the groups × granularity grid.
    pub grid_rows: Vec<String>,
    /// Granularities of the grid.
    pub grid_granularities: Vec<Granularity>,
    /// Classifiers compared by the cross-domain protocol.
    pub cross_domain_classifiers: Vec<String>,
    pub year_range: (i32, i32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelectionSettings {
    pub bins: usize,
    pub trees: usize,
    pub lambda: f64,
}

impl Default for SelectionSettings {
    fn default() -> Self {
        let d = SelectionConfig::default();
        SelectionSettings { bins: d.bins, trees: d.trees, lambda: d.lambda }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            granularity: Granularity::HC,
            groups: "L-N-R-W".into(),
            pruning: "none".into(),
            classifier: ClassifierConfig::default(),
            folds: 5,
            dictionary: None,
            tagger: "perceptron".into(),
            ad_domains: None,
            stopwords: None,
            easy_words: None,
            abbreviations: None,
            political_threshold: 0.5,
            selection: SelectionSettings::default(),
            grid_rows: ["W", "L", "N", "R", "L-N-R-W"].map(String::from).to_vec(),
            grid_granularities: Granularity::ALL.to_vec(),
            cross_domain_classifiers: ["svm", "knn", "rf"].map(String::from).to_vec(),
            year_range: veritag_core::corpus::DEFAULT_YEAR_RANGE,
        }
    }
}

/// Parsed pruning mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pruning {
    None,
    Paper,
    Computed(PathBuf),
}

impl Pruning {
    pub fn parse(s: &str) -> AppResult<Self> {
        match s {
            "none" => Ok(Pruning::None),
            "paper" => Ok(Pruning::Paper),
            _ => match s.strip_prefix("computed:") {
                Some(p) if !p.is_empty() => Ok(Pruning::Computed(PathBuf::from(p))),
                _ => Err(AppError::usage(format!("pruning must be none, paper or computed:PATH, got {s:?}"))),
            },
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = fs::read_to_string(path).at(path)?;
        serde_json::from_str(&text)
            .map_err(|e| AppError::usage(format!("{}: invalid config: {e}", path.display())))
    }

    pub fn group_list(&self) -> AppResult<Vec<Group>> {
        parse_groups(&self.groups).map_err(|e| AppError::usage(e.to_string()))
    }

    pub fn grid_group_rows(&self) -> AppResult<Vec<Vec<Group>>> {
        self.grid_rows
            .iter()
            .map(|r| parse_groups(r).map_err(|e| AppError::usage(e.to_string())))
            .collect()
    }

    pub fn pruning_mode(&self) -> AppResult<Pruning> {
        Pruning::parse(&self.pruning)
    }

    pub fn selection_config(&self) -> SelectionConfig {
        SelectionConfig {
            bins: self.selection.bins,
            trees: self.selection.trees,
            lambda: self.selection.lambda,
            seed: self.seed,
        }
    }

    /// Check values and that every referenced file exists.
    pub fn validate(&self) -> AppResult<()> {
        self.group_list()?;
        self.grid_group_rows()?;
        if self.folds < 2 {
            return Err(AppError::usage(format!("folds must be at least 2, got {}", self.folds)));
        }
        if !(0.0..=1.0).contains(&self.political_threshold) {
            return Err(AppError::usage("political_threshold must be in [0, 1]"));
        }
        if self.year_range.0 > self.year_range.1 {
            return Err(AppError::usage("year_range is empty"));
        }
        for c in &self.cross_domain_classifiers {
            c.parse::<veritag_core::models::ClassifierKind>().map_err(|e| AppError::usage(e.to_string()))?;
        }
        let mut paths: Vec<&Path> = [&self.dictionary, &self.ad_domains, &self.stopwords, &self.easy_words, &self.abbreviations]
            .into_iter()
            .flatten()
            .map(PathBuf::as_path)
            .collect();
        let tagger_path = self.tagger.strip_prefix("perceptron:").map(PathBuf::from);
        if let Some(p) = &tagger_path {
            paths.push(p);
        } else if self.tagger != "rules" && self.tagger != "perceptron" {
            return Err(AppError::usage(format!("tagger must be rules, perceptron or perceptron:PATH, got {:?}", self.tagger)));
        }
        let pruning = self.pruning_mode()?;
        if let Pruning::Computed(p) = &pruning {
            paths.push(p);
        }
        for p in paths {
            if !p.exists() {
                return Err(AppError::data(format!("{}: file not found", p.display())));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"seed": 1, "colour": "red"}"#).is_err());
        let c: RunConfig = serde_json::from_str(r#"{"seed": 1, "classifier": {"kind": "rf"}}"#).unwrap();
        assert_eq!(c.seed, 1);
        assert_eq!(c.classifier.trees, 100);
    }

    #[test]
    fn pruning_modes() {
        assert_eq!(Pruning::parse("paper").unwrap(), Pruning::Paper);
        assert_eq!(Pruning::parse("computed:x.json").unwrap(), Pruning::Computed("x.json".into()));
        assert!(Pruning::parse("computed:").is_err());
        assert!(Pruning::parse("some").is_err());
    }

    #[test]
    fn validation_checks_paths() {
        let c = RunConfig { dictionary: Some("/nonexistent/x.dic".into()), ..RunConfig::default() };
        assert_eq!(c.validate().unwrap_err().kind, crate::error::ErrorKind::Data);
        RunConfig::default().validate().unwrap();
        let c = RunConfig { tagger: "magic".into(), ..RunConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let c = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
