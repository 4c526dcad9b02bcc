//! Part-of-speech tagging and the morphological feature group.

mod perceptron;
mod rules;

use alloc::string::String;
use alloc::vec::Vec;

pub use perceptron::{PerceptronTagger, TrainingOptions};
pub use rules::RuleTagger;

use super::tokenize::TokenizedText;

/// Penn Treebank tags a tagger may emit.
pub const PENN_TAGS: [&str; 45] = [
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", "#", "$", "''", "``", "(", ")", ",", ".", ":",
];

/// The 33 tags counted as morphological features, in feature order. `FOW`
/// is the foreign-word tag (`FW` in tagger output).
pub const MORPH_TAGS: [&str; 33] = [
    "WDT", "PDT", "JJ", "VB", "MD", "CD", "VBD", "VBG", "VBN", "RP", "DT", "NNPS", "NN", "CC",
    "WRB", "FOW", "NNS", "TO", "WP$", "JJS", "WP", "POS", "VBP", "RBR", "NNP", "UH", "PRP", "VBZ",
    "RBS", "PRP$", "RB", "JJR", "IN",
];

/// Map a tag name onto the static tag table.
pub fn intern_tag(tag: &str) -> Option<&'static str> {
    PENN_TAGS.iter().find(|t| **t == tag).copied()
}

/// Anything that assigns one Penn tag per token. `tokens` is one sentence.
pub trait PosTagger {
    fn tag(&self, tokens: &[String]) -> Vec<&'static str>;
}

/// The tagger backends selectable from configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Tagger {
    Rules(RuleTagger),
    Perceptron(PerceptronTagger),
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger::Rules(RuleTagger::default())
    }
}

impl PosTagger for Tagger {
    fn tag(&self, tokens: &[String]) -> Vec<&'static str> {
        match self {
            Tagger::Rules(t) => t.tag(tokens),
            Tagger::Perceptron(t) => t.tag(tokens),
        }
    }
}

pub fn pos_tag(tokens: &[String], tagger: &impl PosTagger) -> Vec<&'static str> {
    tagger.tag(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PosTagCounts {
    /// Aligned with [`MORPH_TAGS`].
    pub counts: [u32; 33],
}

impl Default for PosTagCounts {
    fn default() -> Self {
        PosTagCounts { counts: [0; 33] }
    }
}

impl PosTagCounts {
    pub fn get(&self, tag: &str) -> u32 {
        MORPH_TAGS
            .iter()
            .position(|t| *t == tag)
            .map_or(0, |i| self.counts[i])
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn values(&self) -> [f64; 33] {
        let mut out = [0.0; 33];
        for (o, c) in out.iter_mut().zip(self.counts) {
            *o = f64::from(c);
        }
        out
    }

    pub fn add_tags<'a>(&mut self, tags: impl IntoIterator<Item = &'a str>) {
        for tag in tags {
            let tag = if tag == "FW" { "FOW" } else { tag };
            if let Some(i) = MORPH_TAGS.iter().position(|t| *t == tag) {
                self.counts[i] += 1;
            }
        }
    }
}

/// Tag each sentence and count the morphological tags. Tags outside
/// [`MORPH_TAGS`] (punctuation, `EX`, `LS`, `SYM`) are not counted.
pub fn morphological_features(tokenized: &TokenizedText, tagger: &impl PosTagger) -> PosTagCounts {
    let mut counts = PosTagCounts::default();
    for sentence in tokenized.sentence_tokens() {
        counts.add_tags(tagger.tag(sentence).iter().copied());
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;
    use alloc::vec;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn empty_input() {
        assert!(pos_tag(&[], &RuleTagger::default()).is_empty());
        assert_eq!(morphological_features(&tokenize(""), &Tagger::default()), PosTagCounts::default());
    }

    #[test]
    fn the_cat_sat() {
        assert_eq!(pos_tag(&words("The cat sat"), &RuleTagger::default()), vec!["DT", "NN", "VBD"]);
        let perceptron = PerceptronTagger::train_bundled();
        assert_eq!(pos_tag(&words("The cat sat"), &perceptron), vec!["DT", "NN", "VBD"]);
    }

    #[test]
    fn numeric_fallback() {
        assert_eq!(pos_tag(&words("3"), &RuleTagger::default()), vec!["CD"]);
        assert_eq!(pos_tag(&words("3"), &PerceptronTagger::train_bundled()), vec!["CD"]);
    }

    #[test]
    fn morphological_counts() {
        let c = morphological_features(&tokenize("The cat sat"), &Tagger::default());
        assert_eq!((c.get("DT"), c.get("NN"), c.get("VBD"), c.total()), (1, 1, 1, 3));
        let c = morphological_features(&tokenize("the the the"), &Tagger::default());
        assert_eq!(c.get("DT"), 3);
    }

    #[test]
    fn foreign_words_count_as_fow() {
        let mut c = PosTagCounts::default();
        c.add_tags(["FW", "EX", ","]);
        assert_eq!(c.get("FOW"), 1);
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn morph_tags_are_penn_tags_or_fow() {
        for t in MORPH_TAGS {
            assert!(t == "FOW" || intern_tag(t).is_some(), "{t}");
        }
    }
}
