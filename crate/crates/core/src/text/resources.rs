use alloc::collections::BTreeSet;
use alloc::string::String;

pub const DEFAULT_STOPWORDS: &str = include_str!("../../resources/stopwords.txt");
pub const DEFAULT_EASY_WORDS: &str = include_str!("../../resources/easy_words.txt");
pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../../resources/abbreviations.txt");

/// Parse a one-entry-per-line list (lowercased; blank and `#` lines skipped).
pub fn word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// Word lists the linguistic features depend on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextResources {
    pub stopwords: BTreeSet<String>,
    pub easy_words: BTreeSet<String>,
    pub abbreviations: BTreeSet<String>,
}

impl TextResources {
    pub fn is_stopword(&self, word: &str) -> bool {
        contains_lower(&self.stopwords, word)
    }

    pub fn is_easy_word(&self, word: &str) -> bool {
        contains_lower(&self.easy_words, word)
    }
}

fn contains_lower(set: &BTreeSet<String>, word: &str) -> bool {
    if word.chars().any(char::is_uppercase) {
        set.contains(&word.to_lowercase())
    } else {
        set.contains(word)
    }
}

impl Default for TextResources {
    fn default() -> Self {
        TextResources {
            stopwords: word_list(DEFAULT_STOPWORDS),
            easy_words: word_list(DEFAULT_EASY_WORDS),
            abbreviations: word_list(DEFAULT_ABBREVIATIONS),
        }
    }
}

pub(crate) fn is_default_abbreviation(word: &str) -> bool {
    let lower = word.to_lowercase();
    DEFAULT_ABBREVIATIONS.lines().any(|l| l.trim() == lower)
}

