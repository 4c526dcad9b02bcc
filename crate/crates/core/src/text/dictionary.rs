//! LIWC-layout category dictionaries.
//!
//! ```text
//! %
//! 1	AF.posemo
//! 2	AF.negemo
//! %
//! happ*	1
//! sad	2
//! ```
//!
//! A header block between two `%` lines declares `id<TAB>name`; every later
//! line is `pattern<TAB>id[<TAB>id...]`. A trailing `*` makes the pattern a
//! prefix match. Matching is case-insensitive.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDictionary {
    categories: Vec<String>,
    /// Patterns in file order: (pattern text as written, category indices).
    patterns: Vec<(String, Vec<usize>)>,
    literals: BTreeMap<String, Vec<usize>>,
    prefixes: BTreeMap<String, Vec<usize>>,
    max_prefix_chars: usize,
}

impl CategoryDictionary {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let syntax = |line: usize, message: String| Error::Syntax { line, message };

        let mut opened = false;
        for (n, line) in lines.by_ref() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if t == "%" {
                opened = true;
                break;
            }
            return Err(syntax(n, format!("expected '%' to open the category header, found {t:?}")));
        }
        if !opened {
            return Err(syntax(1, "missing '%' category header".to_string()));
        }

        let mut ids: BTreeMap<String, usize> = BTreeMap::new();
        let mut categories: Vec<String> = Vec::new();
        let mut closed = false;
        for (n, line) in lines.by_ref() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if t == "%" {
                closed = true;
                break;
            }
            let mut parts = t.split_whitespace();
            let (Some(id), Some(name), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(syntax(n, format!("expected 'id<TAB>name', found {t:?}")));
            };
            if ids.contains_key(id) {
                return Err(syntax(n, format!("duplicate category id {id}")));
            }
            if categories.iter().any(|c| c == name) {
                return Err(syntax(n, format!("duplicate category name {name}")));
            }
            ids.insert(id.to_string(), categories.len());
            categories.push(name.to_string());
        }
        if !closed {
            return Err(syntax(0, "category header is not closed by '%'".to_string()));
        }

        let mut dict = CategoryDictionary {
            categories,
            patterns: Vec::new(),
            literals: BTreeMap::new(),
            prefixes: BTreeMap::new(),
            max_prefix_chars: 0,
        };
        for (n, line) in lines {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let mut parts = t.split('\t').map(str::trim).filter(|p| !p.is_empty());
            let pattern = parts.next().unwrap_or_default();
            let mut cats: Vec<usize> = Vec::new();
            for id in parts.flat_map(str::split_whitespace) {
                let idx = *ids
                    .get(id)
                    .ok_or_else(|| syntax(n, format!("pattern {pattern:?} references undeclared category id {id}")))?;
                if !cats.contains(&idx) {
                    cats.push(idx);
                }
            }
            if cats.is_empty() {
                return Err(syntax(n, format!("pattern {pattern:?} has no category")));
            }
            let body = pattern.strip_suffix('*');
            if body.unwrap_or(pattern).contains('*') {
                return Err(syntax(n, format!("'*' is only allowed as the last character: {pattern:?}")));
            }
            dict.add_pattern(pattern, cats);
        }
        Ok(dict)
    }

    fn add_pattern(&mut self, pattern: &str, cats: Vec<usize>) {
        let lower = pattern.to_lowercase();
        let (map, key) = match lower.strip_suffix('*') {
            Some(p) => {
                self.max_prefix_chars = self.max_prefix_chars.max(p.chars().count());
                (&mut self.prefixes, p.to_string())
            }
            None => (&mut self.literals, lower.clone()),
        };
        let entry = map.entry(key).or_default();
        for c in &cats {
            if !entry.contains(c) {
                entry.push(*c);
            }
        }
        self.patterns.push((pattern.to_string(), cats));
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn patterns(&self) -> &[(String, Vec<usize>)] {
        &self.patterns
    }

    /// Category indices a single token matches (sorted, deduplicated).
    pub fn match_token(&self, token: &str) -> Vec<usize> {
        let lower = token.to_lowercase();
        let mut hits: Vec<usize> = Vec::new();
        if let Some(c) = self.literals.get(&lower) {
            hits.extend_from_slice(c);
        }
        if !self.prefixes.is_empty() {
            for (taken, (idx, ch)) in lower.char_indices().enumerate() {
                if taken >= self.max_prefix_chars {
                    break;
                }
                if let Some(c) = self.prefixes.get(&lower[..idx + ch.len_utf8()]) {
                    hits.extend_from_slice(c);
                }
            }
            if let Some(c) = self.prefixes.get("") {
                hits.extend_from_slice(c);
            }
        }
        hits.sort_unstable();
        hits.dedup();
        hits
    }
}

/// Percentage of tokens matching each category, in category order.
pub fn dictionary_scores(tokens: &[String], dict: &CategoryDictionary) -> Vec<f64> {
    let mut counts = alloc::vec![0usize; dict.categories.len()];
    for t in tokens {
        for c in dict.match_token(t) {
            counts[c] += 1;
        }
    }
    let total = tokens.len();
    counts
        .into_iter()
        .map(|c| if total == 0 { 0.0 } else { 100.0 * c as f64 / total as f64 })
        .collect()
}

pub const DEMO_DICTIONARY: &str = include_str!("../../resources/demo.dic");

impl Default for CategoryDictionary {
    /// The small bundled demo dictionary.
    fn default() -> Self {
        CategoryDictionary::parse(DEMO_DICTIONARY).expect("bundled dictionary parses")
    }
}
