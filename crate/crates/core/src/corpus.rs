//! Labeled page corpora: site-label projection, seeded per-site-per-year
//! sampling, and the Naive Bayes filter that keeps political pages.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index::sample as sample_indices;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::rng::{derive_seed, fnv1a64, from_seed};
use crate::text::tokenize;

pub const DEFAULT_YEAR_RANGE: (i32, i32) = (1990, 2100);

/// A crawled page before labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub id: String,
    pub url: String,
    pub site: String,
    pub year: i32,
    #[serde(skip)]
    pub html: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub url: String,
    pub site: String,
    pub label: Label,
    pub year: i32,
    #[serde(skip)]
    pub html: Vec<u8>,
}

/// A site must be a lowercase host name: no scheme, path, or whitespace.
pub fn validate_site(site: &str) -> Result<()> {
    let ok = !site.is_empty()
        && !site.contains("://")
        && !site.contains(['/', '?', '#'])
        && !site.chars().any(|c| c.is_whitespace() || c.is_uppercase());
    if ok {
        Ok(())
    } else {
        Err(Error::Malformed(format!("site {site:?} must be a lowercase domain without scheme or path")))
    }
}

pub fn validate_year(year: i32, range: (i32, i32)) -> Result<()> {
    if year < range.0 || year > range.1 {
        return Err(Error::Malformed(format!("year {year} outside {}..={}", range.0, range.1)));
    }
    Ok(())
}

/// Label each page with its site's label; pages from unlisted sites are
/// dropped and counted.
pub fn project_labels(site_labels: &BTreeMap<String, Label>, pages: Vec<PageRecord>) -> (Vec<RawDocument>, usize) {
    let mut dropped = 0;
    let mut out = Vec::with_capacity(pages.len());
    for p in pages {
        match site_labels.get(&p.site) {
            Some(label) => out.push(RawDocument {
                id: p.id,
                url: p.url,
                site: p.site,
                label: *label,
                year: p.year,
                html: p.html,
            }),
            None => dropped += 1,
        }
    }
    (out, dropped)
}

/// Check ids are unique and every label agrees with the site table.
pub fn validate_documents(docs: &[RawDocument], site_labels: &BTreeMap<String, Label>) -> Result<()> {
    let mut ids = BTreeSet::new();
    for d in docs {
        if !ids.insert(d.id.as_str()) {
            return Err(Error::Malformed(format!("duplicate id {:?}", d.id)));
        }
        validate_site(&d.site)?;
        match site_labels.get(&d.site) {
            None => return Err(Error::Malformed(format!("document {:?}: site {:?} has no label", d.id, d.site))),
            Some(l) if *l != d.label => {
                return Err(Error::Malformed(format!(
                    "document {:?}: label {} disagrees with site {:?} labeled {}",
                    d.id, d.label, d.site, l
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Keep at most `cap` documents per (site, year), drawn uniformly without
/// replacement. Each group draws from its own seed derived from `seed` and
/// the group key, so group membership does not depend on other groups.
/// Output is sorted by (site, year, id).
pub fn balanced_sample(docs: Vec<RawDocument>, cap: usize, seed: u64) -> Result<Vec<RawDocument>> {
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let mut groups: BTreeMap<(String, i32), Vec<RawDocument>> = BTreeMap::new();
    for d in docs {
        groups.entry((d.site.clone(), d.year)).or_default().push(d);
    }
    let mut out = Vec::new();
    for ((site, year), mut group) in groups {
        group.sort_by(|a, b| a.id.cmp(&b.id));
        if group.len() > cap {
            let key = fnv1a64(format!("{site}\n{year}").as_bytes());
            let mut rng = from_seed(derive_seed(seed, key));
            let mut keep: Vec<usize> = sample_indices(&mut rng, group.len(), cap).into_vec();
            keep.sort_unstable();
            let mut taken = Vec::with_capacity(cap);
            let mut it = keep.into_iter().peekable();
            for (i, d) in group.into_iter().enumerate() {
                if it.peek() == Some(&i) {
                    it.next();
                    taken.push(d);
                }
            }
            group = taken;
        }
        out.extend(group);
    }
    Ok(out)
}

/// Multinomial Naive Bayes over log-scaled, idf-weighted unigram counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoliticalFilterModel {
    /// Topic names, sorted.
    pub classes: Vec<String>,
    pub class_log_priors: Vec<f64>,
    /// Sorted, unique.
    pub vocabulary: Vec<String>,
    /// Aligned with `vocabulary`.
    pub idf: Vec<f64>,
    /// `[term][class]`, aligned with `vocabulary` and `classes`.
    pub feature_log_likelihoods: Vec<Vec<f64>>,
}

pub const DEFAULT_POLITICAL_THRESHOLD: f64 = 0.5;
pub const POLITICS: &str = "politics";

fn term_counts(text: &str) -> BTreeMap<String, usize> {
    let mut c = BTreeMap::new();
    for t in tokenize(text).tokens {
        *c.entry(t.to_lowercase()).or_default() += 1;
    }
    c
}

/// Result of scoring one text.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterDecision {
    pub is_political: bool,
    /// Posterior of the politics class.
    pub score: f64,
    /// No in-vocabulary term: the score is the prior.
    pub empty: bool,
}

impl PoliticalFilterModel {
    /// Laplace smoothing α = 1; tf = 1 + ln(count), smooth idf
    /// `ln((1+n)/(1+df)) + 1`, rows not normalized.
    pub fn train<S: AsRef<str>, T: AsRef<str>>(labeled: &[(S, T)]) -> Result<Self> {
        if labeled.is_empty() {
            return Err(Error::EmptyInput("topic corpus"));
        }
        let docs: Vec<(BTreeMap<String, usize>, &str)> =
            labeled.iter().map(|(text, topic)| (term_counts(text.as_ref()), topic.as_ref())).collect();
        let classes: Vec<String> =
            docs.iter().map(|(_, t)| String::from(*t)).collect::<BTreeSet<_>>().into_iter().collect();
        if classes.len() < 2 {
            return Err(Error::SingleClass);
        }
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for (counts, _) in &docs {
            for t in counts.keys() {
                *df.entry(t.as_str()).or_default() += 1;
            }
        }
        let n = docs.len() as f64;
        let vocabulary: Vec<String> = df.keys().map(|t| String::from(*t)).collect();
        let idf: Vec<f64> = df.values().map(|c| libm::log((1.0 + n) / (1.0 + *c as f64)) + 1.0).collect();

        let k = classes.len();
        let mut mass = alloc::vec![alloc::vec![0.0; k]; vocabulary.len()];
        let mut doc_count = alloc::vec![0usize; k];
        for (counts, topic) in &docs {
            let c = classes.iter().position(|x| x == topic).unwrap_or(0);
            doc_count[c] += 1;
            for (t, cnt) in counts {
                let i = vocabulary.binary_search(t).unwrap_or(0);
                mass[i][c] += (1.0 + libm::log(*cnt as f64)) * idf[i];
            }
        }
        let v = vocabulary.len() as f64;
        let totals: Vec<f64> = (0..k).map(|c| crate::math::pairwise_sum(&mass.iter().map(|m| m[c]).collect::<Vec<_>>())).collect();
        let feature_log_likelihoods = mass
            .iter()
            .map(|m| (0..k).map(|c| libm::log((m[c] + 1.0) / (totals[c] + v))).collect())
            .collect();
        let class_log_priors = doc_count.iter().map(|c| libm::log(*c as f64 / n)).collect();
        Ok(PoliticalFilterModel { classes, class_log_priors, vocabulary, idf, feature_log_likelihoods })
    }

    /// Posterior per class (sums to 1).
    pub fn posterior(&self, text: &str) -> (Vec<f64>, bool) {
        let mut logp = self.class_log_priors.clone();
        let mut empty = true;
        // BTreeMap iteration: terms are summed in sorted order
        for (t, cnt) in term_counts(text) {
            if let Ok(i) = self.vocabulary.binary_search(&t) {
                empty = false;
                let x = (1.0 + libm::log(cnt as f64)) * self.idf[i];
                for (lp, ll) in logp.iter_mut().zip(&self.feature_log_likelihoods[i]) {
                    *lp += x * ll;
                }
            }
        }
        let max = logp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logp.iter().map(|l| libm::exp(l - max)).collect();
        let z: f64 = exps.iter().sum();
        (exps.into_iter().map(|e| e / z).collect(), empty)
    }

    pub fn apply(&self, text: &str, threshold: f64) -> Result<FilterDecision> {
        self.apply_for(text, POLITICS, threshold)
    }

    pub fn apply_for(&self, text: &str, class: &str, threshold: f64) -> Result<FilterDecision> {
        if self.classes.is_empty() {
            return Err(Error::Untrained("political filter"));
        }
        let c = self
            .classes
            .iter()
            .position(|x| x == class)
            .ok_or_else(|| Error::InvalidParameter(format!("filter has no {class:?} class")))?;
        let (post, empty) = self.posterior(text);
        Ok(FilterDecision { is_political: post[c] >= threshold, score: post[c], empty })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn page(id: &str, site: &str, year: i32) -> PageRecord {
        PageRecord { id: id.into(), url: format!("https://{site}/{id}"), site: site.into(), year, html: Vec::new() }
    }

    #[test]
    fn projection_and_drops() {
        let labels = BTreeMap::from([(String::from("a.com"), Label::Unreliable)]);
        let (docs, dropped) = project_labels(&labels, vec![page("1", "a.com", 2016), page("2", "a.com", 2016), page("3", "z.com", 2016)]);
        assert_eq!(docs.len(), 2);
        assert!(docs.iter().all(|d| d.label == Label::Unreliable));
        assert_eq!(dropped, 1);
        validate_documents(&docs, &labels).unwrap();
    }

    #[test]
    fn validation_errors() {
        let labels = BTreeMap::from([(String::from("a.com"), Label::Unreliable)]);
        let (mut docs, _) = project_labels(&labels, vec![page("a1", "a.com", 2016), page("a1", "a.com", 2017)]);
        let err = validate_documents(&docs, &labels).unwrap_err();
        assert!(format!("{err}").contains("a1"));
        docs.pop();
        docs[0].label = Label::Reliable;
        assert!(validate_documents(&docs, &labels).is_err());
        assert!(validate_site("https://a.com").is_err());
        assert!(validate_site("A.com").is_err());
        assert!(validate_year(1989, DEFAULT_YEAR_RANGE).is_err());
    }

    fn docs_for(site: &str, year: i32, n: usize) -> Vec<RawDocument> {
        (0..n)
            .map(|i| RawDocument {
                id: format!("{site}-{year}-{i:03}"),
                url: String::new(),
                site: site.into(),
                label: Label::Reliable,
                year,
                html: Vec::new(),
            })
            .collect()
    }

    #[test]
    fn sampling_caps_groups() {
        let mut docs = docs_for("a.com", 2016, 40);
        docs.extend(docs_for("b.com", 2016, 10));
        let out = balanced_sample(docs.clone(), 32, 7).unwrap();
        assert_eq!(out.iter().filter(|d| d.site == "a.com").count(), 32);
        assert_eq!(out.iter().filter(|d| d.site == "b.com").count(), 10);
        assert_eq!(out, balanced_sample(docs.clone(), 32, 7).unwrap());
        let other = balanced_sample(docs, 32, 8).unwrap();
        assert_eq!(other.len(), out.len());
        assert_ne!(other, out);
        assert!(out.windows(2).all(|w| (&w[0].site, w[0].year, &w[0].id) < (&w[1].site, w[1].year, &w[1].id)));
    }

    fn toy() -> PoliticalFilterModel {
        PoliticalFilterModel::train(&[("tax vote senate", "politics"), ("goal match league", "sports")]).unwrap()
    }

    #[test]
    fn senate_vote_is_political() {
        let m = toy();
        let d = m.apply("senate vote", 0.5).unwrap();
        assert!(d.is_political);
        // hand oracle: every term has df 1 so idf = ln(3/2)+1; each class
        // holds 3 such terms; likelihood of a seen term is (w+1)/(3w+6)
        let w = libm::log(1.5) + 1.0;
        let seen = libm::log((w + 1.0) / (3.0 * w + 6.0));
        let unseen = libm::log(1.0 / (3.0 * w + 6.0));
        let lp = 2.0 * w * seen;
        let ls = 2.0 * w * unseen;
        let expected = 1.0 / (1.0 + libm::exp(ls - lp));
        assert!((d.score - expected).abs() < 1e-12);
    }

    #[test]
    fn out_of_vocabulary_reduces_to_prior() {
        let m = toy();
        let d = m.apply("zebra quantum", 0.5).unwrap();
        assert!((d.score - 0.5).abs() < 1e-12);
        assert!(d.empty);
        assert!(m.apply("", 0.5).unwrap().empty);
    }

    #[test]
    fn training_errors() {
        let empty: [(&str, &str); 0] = [];
        assert!(PoliticalFilterModel::train(&empty).is_err());
        assert_eq!(PoliticalFilterModel::train(&[("a b", "politics")]), Err(Error::SingleClass));
        let m = PoliticalFilterModel::train(&[("a", "x"), ("b", "y")]).unwrap();
        assert!(m.apply("a", 0.5).is_err());
    }

    #[test]
    fn priors_sum_to_one() {
        let m = PoliticalFilterModel::train(&[("a", "x"), ("b", "y"), ("c", "y")]).unwrap();
        let s: f64 = m.class_log_priors.iter().map(|l| libm::exp(*l)).sum();
        assert!((s - 1.0).abs() < 1e-9);
    }
}
