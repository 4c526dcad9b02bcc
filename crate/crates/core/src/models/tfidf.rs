use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::SparseVec;
use crate::error::{Error, Result};
use crate::text::tokenize;

pub const DEFAULT_MIN_DF: usize = 2;

/// Lowercased unigrams followed by adjacent-token bigrams (`"a b"`).
pub fn ngrams(text: &str) -> Vec<String> {
    let toks: Vec<String> = tokenize(text).tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut out = toks.clone();
    out.extend(toks.windows(2).map(|w| format!("{} {}", w[0], w[1])));
    out
}

/// Unigram+bigram TF-IDF with smooth idf `ln((1+n)/(1+df)) + 1`, raw term
/// counts and L2-normalized rows. The vocabulary is sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfVectorizer {
    pub vocabulary: Vec<String>,
    pub idf: Vec<f64>,
    pub min_df: usize,
}

impl TfidfVectorizer {
    pub fn fit<S: AsRef<str>>(docs: &[S], min_df: usize) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyInput("TF-IDF documents"));
        }
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for d in docs {
            let mut grams = ngrams(d.as_ref());
            grams.sort();
            grams.dedup();
            for g in grams {
                *df.entry(g).or_default() += 1;
            }
        }
        let n = docs.len() as f64;
        let (vocabulary, idf) = df
            .into_iter()
            .filter(|(_, c)| *c >= min_df.max(1))
            .map(|(t, c)| (t, libm::log((1.0 + n) / (1.0 + c as f64)) + 1.0))
            .unzip();
        Ok(TfidfVectorizer { vocabulary, idf, min_df })
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn transform(&self, text: &str) -> SparseVec {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for g in ngrams(text) {
            if let Ok(i) = self.vocabulary.binary_search(&g) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut v = SparseVec {
            idx: counts.keys().map(|i| *i as u32).collect(),
            val: counts.iter().map(|(i, c)| c * self.idf[*i]).collect(),
        };
        let norm = libm::sqrt(v.sq_norm());
        if norm > 0.0 {
            v.val.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}
