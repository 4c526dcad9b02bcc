use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::resources::is_default_abbreviation;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenizedText {
    pub tokens: Vec<String>,
    /// Parallel to `tokens`: whether the token is a URL.
    pub is_url: Vec<bool>,
    /// Token-index ranges, partitioning `0..tokens.len()`.
    pub sentences: Vec<Range<usize>>,
    /// Non-whitespace characters in the source text.
    pub char_count: usize,
}

impl TokenizedText {
    pub fn word_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn sentence_tokens(&self) -> impl Iterator<Item = &[String]> + '_ {
        self.sentences.iter().map(move |r| &self.tokens[r.clone()])
    }

    pub fn url_count(&self) -> usize {
        self.is_url.iter().filter(|u| **u).count()
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_apostrophe(c)
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '\u{201c}' | '\u{2018}')
}

fn url_start(rest: &str) -> bool {
    let head: String = rest.chars().take(8).collect::<String>().to_ascii_lowercase();
    head.starts_with("http://") || head.starts_with("https://") || head.starts_with("www.")
}

/// Tokenize with the bundled abbreviation list.
pub fn tokenize(text: &str) -> TokenizedText {
    tokenize_impl(text, &is_default_abbreviation)
}

/// Tokenize with a caller-supplied abbreviation list (lowercase entries,
/// without the trailing period).
pub fn tokenize_with(text: &str, abbreviations: &BTreeSet<String>) -> TokenizedText {
    tokenize_impl(text, &|w: &str| abbreviations.contains(&w.to_lowercase()))
}

/// Words are maximal runs of letters, digits and apostrophes (apostrophes
/// trimmed from the ends); `http://`, `https://` and `www.` runs are single
/// URL tokens. A sentence ends at a run of `.`/`!`/`?` followed by
/// whitespace and a capital letter, or by the end of the text, unless the
/// run is a single `.` directly after an abbreviation or a one-letter
/// initial.
fn tokenize_impl(text: &str, is_abbrev: &dyn Fn(&str) -> bool) -> TokenizedText {
    let mut out = TokenizedText {
        char_count: text.chars().filter(|c| !c.is_whitespace()).count(),
        ..Default::default()
    };
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut sentence_start = 0;
    // char index just past the last token, to test adjacency with a period
    let mut last_token_end: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let prev_alnum = i > 0 && chars[i - 1].1.is_alphanumeric();
        if !prev_alnum && (c == 'h' || c == 'H' || c == 'w' || c == 'W') && url_start(&text[byte..]) {
            let mut j = i;
            while j < chars.len() && !chars[j].1.is_whitespace() {
                j += 1;
            }
            while j > i && matches!(chars[j - 1].1, '.' | ',' | ';' | ':' | '!' | '?' | ')' | '"' | '\'') {
                j -= 1;
            }
            let end_byte = chars.get(j).map_or(text.len(), |c| c.0);
            out.tokens.push(String::from(&text[byte..end_byte]));
            out.is_url.push(true);
            last_token_end = Some(j);
            i = j;
            continue;
        }
        if is_word_char(c) {
            let mut j = i;
            while j < chars.len() && is_word_char(chars[j].1) {
                j += 1;
            }
            let end_byte = chars.get(j).map_or(text.len(), |c| c.0);
            let word = text[byte..end_byte].trim_matches(is_apostrophe);
            if !word.is_empty() {
                out.tokens.push(String::from(word));
                out.is_url.push(false);
                last_token_end = Some(j);
            }
            i = j;
            continue;
        }
        if is_terminator(c) {
            let mut j = i;
            while j < chars.len() && is_terminator(chars[j].1) {
                j += 1;
            }
            let single_period = j == i + 1 && c == '.';
            let after_token = last_token_end == Some(i);
            let abbreviated = single_period
                && after_token
                && out.tokens.last().is_some_and(|t| {
                    is_abbrev(t) || (t.chars().count() == 1 && t.chars().all(char::is_alphabetic))
                });
            let mut k = j;
            while k < chars.len() && is_closing(chars[k].1) {
                k += 1;
            }
            let ws_start = k;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let had_ws = k > ws_start;
            while k < chars.len() && is_opening(chars[k].1) {
                k += 1;
            }
            let at_end = k >= chars.len();
            let capital_next = had_ws && chars.get(k).is_some_and(|(_, n)| n.is_uppercase());
            if !abbreviated && (at_end || capital_next) && out.tokens.len() > sentence_start {
                out.sentences.push(sentence_start..out.tokens.len());
                sentence_start = out.tokens.len();
            }
            i = j;
            continue;
        }
        i += 1;
    }
    if out.tokens.len() > sentence_start {
        out.sentences.push(sentence_start..out.tokens.len());
    }
    out
}
