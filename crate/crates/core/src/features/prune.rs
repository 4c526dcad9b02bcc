//! The published per-granularity pruning lists.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{FeatureSchema, Granularity, Group, PruningMode};
use crate::markup::MARKUP_FEATURE_NAMES;
use crate::text::pos::MORPH_TAGS;
use crate::text::readability::READABILITY_FEATURE_NAMES;

const HEADLINE: &[&str] = &[
    "FOW", "IN", "JJR", "PRP$", "TO", "VBD", "VBG", "VBZ", "WP$", "MSI", "CW", "TT", "FW.semicolon",
    "BP.ingest", "RL.time", "PC.home",
];
const CONTENT: &[&str] = &["DT", "PDT", "RBR", "RP", "OG", "UH"];
const HEADLINE_CONTENT: &[&str] = &["DT", "JJS", "PDT", "POS", "RBR", "RBS", "UH", "WRB"];

/// Web-markup features kept at every granularity.
pub const WEB_MARKUP_KEPT: [&str; 7] = ["IT", "AVT", "AU", "LKT", "ADS", "ST", "BT"];

pub fn paper_pruning_list(granularity: Granularity) -> &'static [&'static str] {
    match granularity {
        Granularity::H => HEADLINE,
        Granularity::C => CONTENT,
        Granularity::HC => HEADLINE_CONTENT,
    }
}

/// Group a bare list entry refers to: a tag is `N`, a readability name
/// (or `CW`, covering both CW features) is `R`, a markup name is `W`,
/// anything else is a dictionary category.
pub fn resolve_group(name: &str) -> Group {
    if MORPH_TAGS.contains(&name) {
        Group::N
    } else if name == "CW" || READABILITY_FEATURE_NAMES.contains(&name) {
        Group::R
    } else if MARKUP_FEATURE_NAMES.contains(&name) {
        Group::W
    } else {
        Group::L
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome {
    pub schema: FeatureSchema,
    pub removed: Vec<String>,
    /// List entries with no matching feature in the schema.
    pub missing: Vec<String>,
}

fn covers(entry: &str, feature: &str) -> bool {
    let full = format!("{}.{entry}", resolve_group(entry));
    feature == full || feature.strip_prefix(full.as_str()).is_some_and(|rest| rest.starts_with('.'))
}

/// Remove the listed features for the schema's granularity (an entry `X`
/// removes `G.X` and every `G.X.*`), and every web-markup feature outside
/// [`WEB_MARKUP_KEPT`].
pub fn apply_paper_pruning(schema: &FeatureSchema) -> PruneOutcome {
    let list = paper_pruning_list(schema.granularity);
    let is_dropped = |name: &str| {
        if let Some(w) = name.strip_prefix("W.") {
            if !WEB_MARKUP_KEPT.contains(&w) {
                return true;
            }
        }
        list.iter().any(|e| covers(e, name))
    };
    let removed: Vec<String> = schema.names.iter().filter(|n| is_dropped(n)).cloned().collect();
    let missing = list
        .iter()
        .filter(|e| !schema.names.iter().any(|n| covers(e, n)))
        .map(|e| String::from(*e))
        .collect();
    let mut pruned = schema.retain(|_, n| !is_dropped(n));
    pruned.pruning = PruningMode::Paper;
    PruneOutcome { schema: pruned, removed, missing }
}
