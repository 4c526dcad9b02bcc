use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{intern_tag, PosTagger, RuleTagger};
use crate::error::{Error, Result};
use crate::rng;

const BUNDLED_CORPUS: &str = include_str!("../../../resources/tagged_corpus.txt");

/// Version written into weights files.
pub const WEIGHTS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainingOptions {
    pub iterations: usize,
    pub seed: u64,
}

impl Default for TrainingOptions {
    fn default() -> Self {
        TrainingOptions { iterations: 5, seed: 0 }
    }
}

/// Greedy left-to-right averaged perceptron.
///
/// Features: bias, lowercased word, word shape, suffixes of length 1..=3,
/// the two previous predicted tags (alone and as a pair) and a
/// sentence-start flag. Words never seen in training are tagged by the
/// [`RuleTagger`] fallback instead.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronTagger {
    tags: Vec<&'static str>,
    weights: BTreeMap<String, Vec<f64>>,
    known_words: BTreeSet<String>,
    fallback: RuleTagger,
}

#[derive(Serialize, Deserialize)]
struct WeightsFile {
    format_version: u32,
    tags: Vec<String>,
    known_words: Vec<String>,
    weights: BTreeMap<String, Vec<f64>>,
}

fn shape(word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        let s = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if !out.ends_with(s) {
            out.push(s);
        }
    }
    out
}

fn suffix(word: &str, n: usize) -> &str {
    let start = word.char_indices().rev().nth(n - 1).map_or(0, |(i, _)| i);
    &word[start..]
}

fn features(word: &str, position: usize, p1: &str, p2: &str) -> Vec<String> {
    let lower = word.to_lowercase();
    let mut f = Vec::with_capacity(10);
    f.push("bias".to_string());
    f.push(format!("w={lower}"));
    f.push(format!("shape={}", shape(word)));
    for n in 1..=3 {
        f.push(format!("s{n}={}", suffix(&lower, n)));
    }
    f.push(format!("p1={p1}"));
    f.push(format!("p2={p2}"));
    f.push(format!("p1p2={p1}+{p2}"));
    if position == 0 {
        f.push("i0".to_string());
    }
    f
}

fn context(tags: &[&'static str]) -> (&'static str, &'static str) {
    let n = tags.len();
    let p1 = if n >= 1 { tags[n - 1] } else { "-START-" };
    let p2 = if n >= 2 { tags[n - 2] } else { "-START2-" };
    (p1, p2)
}

/// Parse `word/TAG` lines; `#` starts a comment line.
pub fn parse_tagged_corpus(text: &str) -> Result<Vec<(Vec<String>, Vec<&'static str>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = Vec::new();
        let mut tags = Vec::new();
        for item in line.split_whitespace() {
            let (w, t) = item.rsplit_once('/').ok_or_else(|| Error::Syntax {
                line: i + 1,
                message: format!("expected word/TAG, got {item:?}"),
            })?;
            let tag = intern_tag(t).ok_or_else(|| Error::Syntax {
                line: i + 1,
                message: format!("unknown tag {t:?}"),
            })?;
            words.push(w.to_string());
            tags.push(tag);
        }
        out.push((words, tags));
    }
    Ok(out)
}

impl PerceptronTagger {
    pub fn train(sentences: &[(Vec<String>, Vec<&'static str>)], options: TrainingOptions) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::EmptyInput("tagged sentences"));
        }
        let mut tag_set = BTreeSet::new();
        let mut known_words = BTreeSet::new();
        for (words, tags) in sentences {
            if words.len() != tags.len() {
                return Err(Error::LengthMismatch { expected: words.len(), actual: tags.len() });
            }
            tag_set.extend(tags.iter().copied());
            known_words.extend(words.iter().map(|w| w.to_lowercase()));
        }
        let tags: Vec<&'static str> = tag_set.into_iter().collect();
        let n_tags = tags.len();

        let mut weights: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        // running sums for averaging, and the step each weight last changed
        let mut totals: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        let mut stamps: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        let mut step: u64 = 0;

        let mut order: Vec<usize> = (0..sentences.len()).collect();
        let mut r = rng::from_seed(options.seed);
        for _ in 0..options.iterations {
            order.shuffle(&mut r);
            for &s in &order {
                let (words, gold) = &sentences[s];
                let mut predicted: Vec<&'static str> = Vec::with_capacity(words.len());
                for (i, word) in words.iter().enumerate() {
                    step += 1;
                    let (p1, p2) = context(&predicted);
                    let feats = features(word, i, p1, p2);
                    let guess = argmax(&tags, &weights, &feats);
                    let truth = gold[i];
                    if guess != truth {
                        let ti = tags.iter().position(|t| *t == truth).unwrap_or(0);
                        let gi = tags.iter().position(|t| *t == guess).unwrap_or(0);
                        for f in &feats {
                            let w = weights.entry(f.clone()).or_insert_with(|| alloc::vec![0.0; n_tags]);
                            let tot = totals.entry(f.clone()).or_insert_with(|| alloc::vec![0.0; n_tags]);
                            let st = stamps.entry(f.clone()).or_insert_with(|| alloc::vec![0; n_tags]);
                            for (idx, delta) in [(ti, 1.0), (gi, -1.0)] {
                                tot[idx] += (step - st[idx]) as f64 * w[idx];
                                st[idx] = step;
                                w[idx] += delta;
                            }
                        }
                    }
                    predicted.push(guess);
                }
            }
        }

        let mut averaged = BTreeMap::new();
        for (f, w) in &weights {
            let tot = &totals[f];
            let st = &stamps[f];
            let avg: Vec<f64> = (0..n_tags)
                .map(|i| (tot[i] + (step - st[i]) as f64 * w[i]) / step as f64)
                .collect();
            if avg.iter().any(|v| *v != 0.0) {
                averaged.insert(f.clone(), avg);
            }
        }
        Ok(PerceptronTagger { tags, weights: averaged, known_words, fallback: RuleTagger::default() })
    }

    /// Train on the hand-tagged sentences shipped with the crate.
    pub fn train_bundled() -> Self {
        let corpus = parse_tagged_corpus(BUNDLED_CORPUS).expect("bundled corpus parses");
        Self::train(&corpus, TrainingOptions::default()).expect("bundled corpus is non-empty")
    }

    pub fn is_known(&self, word: &str) -> bool {
        self.known_words.contains(&word.to_lowercase())
    }

    pub fn to_json(&self) -> String {
        let file = WeightsFile {
            format_version: WEIGHTS_FORMAT_VERSION,
            tags: self.tags.iter().map(|t| t.to_string()).collect(),
            known_words: self.known_words.iter().cloned().collect(),
            weights: self.weights.clone(),
        };
        serde_json::to_string(&file).expect("weights serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WeightsFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(format!("tagger weights: {e}")))?;
        if file.format_version != WEIGHTS_FORMAT_VERSION {
            return Err(Error::Malformed(format!(
                "tagger weights format_version {} (expected {WEIGHTS_FORMAT_VERSION})",
                file.format_version
            )));
        }
        let tags = file
            .tags
            .iter()
            .map(|t| intern_tag(t).ok_or_else(|| Error::Malformed(format!("unknown tag {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some((f, _)) = file.weights.iter().find(|(_, w)| w.len() != tags.len()) {
            return Err(Error::Malformed(format!("feature {f:?} has the wrong number of weights")));
        }
        Ok(PerceptronTagger {
            tags,
            weights: file.weights,
            known_words: file.known_words.into_iter().collect(),
            fallback: RuleTagger::default(),
        })
    }
}

/// Highest-scoring tag; ties go to the tag that sorts first.
fn argmax(tags: &[&'static str], weights: &BTreeMap<String, Vec<f64>>, feats: &[String]) -> &'static str {
    let mut scores = alloc::vec![0.0; tags.len()];
    for f in feats {
        if let Some(w) = weights.get(f) {
            for (s, v) in scores.iter_mut().zip(w) {
                *s += v;
            }
        }
    }
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    tags[best]
}

impl PosTagger for PerceptronTagger {
    fn tag(&self, tokens: &[String]) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::with_capacity(tokens.len());
        for (i, word) in tokens.iter().enumerate() {
            let tag = if self.is_known(word) {
                let (p1, p2) = context(&out);
                argmax(&self.tags, &self.weights, &features(word, i, p1, p2))
            } else {
                let prev_word = i.checked_sub(1).map(|j| tokens[j].as_str());
                self.fallback.tag_word(word, i, prev_word, out.last().copied())
            };
            out.push(tag);
        }
        out
    }
}
