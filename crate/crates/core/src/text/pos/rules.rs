use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{intern_tag, PosTagger};

const LEXICON: &str = include_str!("../../../resources/lexicon.tsv");

/// Lexicon lookup plus suffix/shape rules.
///
/// Unknown words: numbers → `CD`; capitalized mid-sentence → `NNP`
/// (`NNPS` for plurals); after a modal or `to` → `VB`; `-ing` → `VBG`;
/// `-ed` → `VBD` (`VBN` after a form of have/be); `-ly` → `RB`; `-est` →
/// `JJS`; adjective suffixes → `JJ`; `-s` → `NNS` (`VBZ` after a noun or
/// pronoun); anything else → `NN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTagger {
    lexicon: BTreeMap<String, &'static str>,
}

impl Default for RuleTagger {
    fn default() -> Self {
        let lexicon = LEXICON
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .filter_map(|l| {
                let mut p = l.split('\t');
                let word = p.next()?.trim();
                let tag = intern_tag(p.next()?.trim())?;
                Some((word.to_string(), tag))
            })
            .collect();
        RuleTagger { lexicon }
    }
}

const HAVE_BE: &[&str] = &[
    "have", "has", "had", "having", "is", "are", "was", "were", "be", "been", "being", "am", "get",
    "gets", "got",
];

const ADJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "ible", "less", "ic", "al", "ish"];

fn is_numeric(word: &str) -> bool {
    word.chars().any(|c| c.is_ascii_digit())
        && word.chars().all(|c| c.is_ascii_digit() || matches!(c, ',' | '.' | '\'' | 's'))
}

impl RuleTagger {
    pub fn lexicon_tag(&self, word: &str) -> Option<&'static str> {
        self.lexicon.get(&word.to_lowercase()).copied()
    }

    /// Tag one word given its sentence position and left context.
    pub fn tag_word(&self, word: &str, position: usize, prev_word: Option<&str>, prev_tag: Option<&str>) -> &'static str {
        if is_numeric(word) {
            return "CD";
        }
        if word.contains("://") || word.to_ascii_lowercase().starts_with("www.") {
            return "NN";
        }
        let lower = word.to_lowercase();
        let after_have_be = prev_word.is_some_and(|p| HAVE_BE.contains(&p.to_lowercase().as_str()));
        let first_upper = word.chars().next().is_some_and(char::is_uppercase);
        let all_upper = word.chars().count() > 1 && word.chars().all(|c| !c.is_lowercase());

        if let Some(tag) = self.lexicon.get(&lower) {
            if *tag == "VBD" && after_have_be {
                return "VBN";
            }
            // a capitalized closed-class word mid-sentence is still that word
            return tag;
        }
        if first_upper && (position > 0 || all_upper) {
            let plural = lower.len() > 3 && lower.ends_with('s') && !lower.ends_with("ss") && !all_upper;
            return if plural { "NNPS" } else { "NNP" };
        }
        if matches!(prev_tag, Some("MD") | Some("TO")) {
            return "VB";
        }
        let n = lower.chars().count();
        if n > 4 && lower.ends_with("ing") {
            return "VBG";
        }
        if n > 3 && lower.ends_with("ed") {
            return if after_have_be { "VBN" } else { "VBD" };
        }
        if n > 3 && lower.ends_with("ly") {
            return "RB";
        }
        if n > 4 && lower.ends_with("est") {
            return "JJS";
        }
        if n > 4 && ADJ_SUFFIXES.iter().any(|s| lower.ends_with(s)) {
            return "JJ";
        }
        if n > 3 && lower.ends_with('s') && !lower.ends_with("ss") && !lower.ends_with("us") && !lower.ends_with("is") {
            return if matches!(prev_tag, Some("NN") | Some("NNP") | Some("PRP")) {
                "VBZ"
            } else {
                "NNS"
            };
        }
        "NN"
    }
}

impl PosTagger for RuleTagger {
    fn tag(&self, tokens: &[String]) -> Vec<&'static str> {
        let mut tags: Vec<&'static str> = Vec::with_capacity(tokens.len());
        for (i, word) in tokens.iter().enumerate() {
            let prev_word = i.checked_sub(1).map(|j| tokens[j].as_str());
            let prev_tag = tags.last().copied();
            tags.push(self.tag_word(word, i, prev_word, prev_tag));
        }
        tags
    }
}
