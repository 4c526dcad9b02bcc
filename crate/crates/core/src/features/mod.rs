//! Named TAG feature vectors: schema, per-page extraction, pruning and
//! scaling.
//!
//! Names are `group.name[.sub]` with group one of `N` (part-of-speech
//! counts), `L` (dictionary categories), `R` (readability) and `W` (web
//! markup).

mod prune;
mod standardize;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use prune::{apply_paper_pruning, paper_pruning_list, resolve_group, PruneOutcome, WEB_MARKUP_KEPT};
pub use standardize::Standardizer;

use crate::error::{Error, Result};
use crate::html::Document;
use crate::label::Label;
use crate::markup::{markup_features, AdDomains, Article, MARKUP_FEATURE_NAMES};
use crate::rng::fnv1a64;
use crate::text::pos::MORPH_TAGS;
use crate::text::readability::READABILITY_FEATURE_NAMES;
use crate::text::{
    dictionary_scores, morphological_features, readability_features, tokenize_with, CategoryDictionary,
    Tagger, TextResources,
};

/// Which text the linguistic groups are computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Granularity {
    H,
    C,
    HC,
}

impl Granularity {
    pub const ALL: [Granularity; 3] = [Granularity::H, Granularity::C, Granularity::HC];

    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::H => "H",
            Granularity::C => "C",
            Granularity::HC => "HC",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Granularity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "H" => Ok(Granularity::H),
            "C" => Ok(Granularity::C),
            "HC" => Ok(Granularity::HC),
            _ => Err(Error::InvalidParameter(format!("unknown granularity {s:?} (H, C or HC)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    N,
    L,
    R,
    W,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::N, Group::L, Group::R, Group::W];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::N => "N",
            Group::L => "L",
            Group::R => "R",
            Group::W => "W",
        }
    }

    pub fn of_feature(name: &str) -> Option<Group> {
        let prefix = name.split('.').next()?;
        Group::ALL.into_iter().find(|g| g.as_str() == prefix)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown feature group {s:?} (N, L, R or W)")))
    }
}

/// Parse a group list such as `L-N-R-W`, `N,L` or `W`. Output is in
/// canonical N, L, R, W order without duplicates.
pub fn parse_groups(s: &str) -> Result<Vec<Group>> {
    let mut out: Vec<Group> = Vec::new();
    for part in s.split(['-', ',', '+', ' ']).filter(|p| !p.is_empty()) {
        out.push(part.parse()?);
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter(format!("empty group list {s:?}")));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// How a schema was reduced from the full feature set.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruningMode {
    #[default]
    None,
    Paper,
    /// Selected by importance scores; carries the report path.
    Computed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub names: Vec<String>,
    pub granularity: Granularity,
    pub groups: Vec<Group>,
    #[serde(default)]
    pub pruning: PruningMode,
}

impl FeatureSchema {
    /// Every feature the groups can produce, in N, L, R, W order.
    pub fn full(granularity: Granularity, groups: &[Group], dictionary: &CategoryDictionary) -> Self {
        let mut groups = groups.to_vec();
        groups.sort();
        groups.dedup();
        let mut names = Vec::new();
        for g in &groups {
            match g {
                Group::N => names.extend(MORPH_TAGS.iter().map(|t| format!("N.{t}"))),
                Group::L => names.extend(dictionary.categories().iter().map(|c| format!("L.{c}"))),
                Group::R => names.extend(READABILITY_FEATURE_NAMES.iter().map(|t| format!("R.{t}"))),
                Group::W => names.extend(MARKUP_FEATURE_NAMES.iter().map(|t| format!("W.{t}"))),
            }
        }
        FeatureSchema { names, granularity, groups, pruning: PruningMode::None }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Stable identifier of the feature layout (granularity + ordered names).
    pub fn hash(&self) -> u64 {
        let mut key = String::from(self.granularity.as_str());
        for n in &self.names {
            key.push('\n');
            key.push_str(n);
        }
        fnv1a64(key.as_bytes())
    }

    /// Keep the features for which `keep` is true, preserving order.
    pub fn retain(&self, mut keep: impl FnMut(usize, &str) -> bool) -> FeatureSchema {
        FeatureSchema {
            names: self
                .names
                .iter()
                .enumerate()
                .filter(|(i, n)| keep(*i, n))
                .map(|(_, n)| n.clone())
                .collect(),
            granularity: self.granularity,
            groups: self.groups.clone(),
            pruning: self.pruning.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = alloc::collections::BTreeSet::new();
        for n in &self.names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Malformed(format!("duplicate feature name {n:?}")));
            }
            match Group::of_feature(n) {
                Some(g) if self.groups.contains(&g) => {}
                _ => return Err(Error::Malformed(format!("feature {n:?} is outside groups {:?}", self.groups))),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub doc_id: String,
    pub values: Vec<f64>,
    pub label: Option<Label>,
}

/// Everything extraction reads besides the page itself. Immutable and
/// shareable across threads.
#[derive(Debug, Clone, Default)]
pub struct ExtractionResources {
    pub dictionary: CategoryDictionary,
    pub tagger: Tagger,
    pub text: TextResources,
    pub ad_domains: AdDomains,
}

/// The text the linguistic groups see at a granularity.
pub fn granularity_text(article: &Article, granularity: Granularity) -> String {
    match granularity {
        Granularity::H => article.headline.clone(),
        Granularity::C => article.content.clone(),
        Granularity::HC => format!("{}\n{}", article.headline, article.content),
    }
}

/// All values the requested groups produce, keyed by feature name.
pub fn page_features(
    article: &Article,
    doc: &Document,
    granularity: Granularity,
    groups: &[Group],
    res: &ExtractionResources,
) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let linguistic = groups.iter().any(|g| matches!(g, Group::N | Group::L | Group::R));
    if linguistic {
        let text = granularity_text(article, granularity);
        let tok = tokenize_with(&text, &res.text.abbreviations);
        if groups.contains(&Group::N) {
            let counts = morphological_features(&tok, &res.tagger);
            for (t, v) in MORPH_TAGS.iter().zip(counts.values()) {
                out.insert(format!("N.{t}"), v);
            }
        }
        if groups.contains(&Group::L) {
            let scores = dictionary_scores(&tok.tokens, &res.dictionary);
            for (c, v) in res.dictionary.categories().iter().zip(scores) {
                out.insert(format!("L.{c}"), v);
            }
        }
        if groups.contains(&Group::R) {
            let r = readability_features(&tok, &res.text);
            for (n, v) in READABILITY_FEATURE_NAMES.iter().zip(r.values()) {
                out.insert(format!("R.{n}"), v);
            }
        }
    }
    if groups.contains(&Group::W) {
        let w = markup_features(doc, &res.ad_domains);
        for (n, v) in MARKUP_FEATURE_NAMES.iter().zip(w.values()) {
            out.insert(format!("W.{n}"), v);
        }
    }
    out
}

/// Feature vector for one page, aligned to `schema`.
pub fn extract_tag_features(
    article: &Article,
    doc: &Document,
    schema: &FeatureSchema,
    res: &ExtractionResources,
) -> Result<Vec<f64>> {
    let all = page_features(article, doc, schema.granularity, &schema.groups, res);
    schema
        .names
        .iter()
        .map(|n| {
            all.get(n)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("feature {n:?} is not produced by the configured resources")))
        })
        .collect()
}

/// Rows of a labeled matrix as (values, class id) pairs; errors if any
/// vector is unlabeled or misaligned.
pub fn labeled_matrix(vectors: &[FeatureVector], width: usize) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    let mut x = Vec::with_capacity(vectors.len());
    let mut y = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.values.len() != width {
            return Err(Error::LengthMismatch { expected: width, actual: v.values.len() });
        }
        let label = v
            .label
            .ok_or_else(|| Error::Malformed(format!("document {:?} has no label", v.doc_id)))?;
        x.push(v.values.clone());
        y.push(label.id());
    }
    Ok((x, y))
}

impl fmt::Display for FeatureSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        write!(f, "{} features, groups {}, granularity {}", self.len(), groups.join("-"), self.granularity)
    }
}
