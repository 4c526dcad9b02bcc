//! Loading the word lists, dictionary and tagger named by the config.

use std::fs;
use std::path::Path;

use veritag_core::features::ExtractionResources;
use veritag_core::markup::AdDomains;
use veritag_core::text::resources::word_list;
use veritag_core::text::{CategoryDictionary, PerceptronTagger, RuleTagger, Tagger, TextResources};

use crate::config::RunConfig;
use crate::error::{AppError, AppResult, IoContext};

fn read(path: &Path) -> AppResult<String> {
    fs::read_to_string(path).at(path)
}

/// Parse a tagger spec: `rules`, `perceptron` (trained on the bundled
/// corpus) or `perceptron:PATH` (saved weights).
pub fn load_tagger(spec: &str) -> AppResult<Tagger> {
    match spec {
        "rules" => Ok(Tagger::Rules(RuleTagger::default())),
        "perceptron" => Ok(Tagger::Perceptron(PerceptronTagger::train_bundled())),
        _ => match spec.strip_prefix("perceptron:") {
            Some(p) if !p.is_empty() => {
                let path = Path::new(p);
                let t = PerceptronTagger::from_json(&read(path)?).map_err(|e| AppError::from(e).context(path.display()))?;
                Ok(Tagger::Perceptron(t))
            }
            _ => Err(AppError::usage(format!("tagger must be rules, perceptron or perceptron:PATH, got {spec:?}"))),
        },
    }
}

pub fn load_dictionary(path: Option<&Path>) -> AppResult<CategoryDictionary> {
    match path {
        None => Ok(CategoryDictionary::default()),
        Some(p) => CategoryDictionary::parse(&read(p)?).map_err(|e| AppError::from(e).context(p.display())),
    }
}

pub fn load_text_resources(cfg: &RunConfig) -> AppResult<TextResources> {
    let mut res = TextResources::default();
    if let Some(p) = &cfg.stopwords {
        res.stopwords = word_list(&read(p)?);
    }
    if let Some(p) = &cfg.easy_words {
        res.easy_words = word_list(&read(p)?);
    }
    if let Some(p) = &cfg.abbreviations {
        res.abbreviations = word_list(&read(p)?);
    }
    Ok(res)
}

/// The bundled ad-network list, extended by the configured file.
pub fn load_ad_domains(path: Option<&Path>) -> AppResult<AdDomains> {
    let mut domains = AdDomains::default();
    if let Some(p) = path {
        domains.extend(&AdDomains::parse(&read(p)?));
    }
    Ok(domains)
}

pub fn load_resources(cfg: &RunConfig) -> AppResult<ExtractionResources> {
    Ok(ExtractionResources {
        dictionary: load_dictionary(cfg.dictionary.as_deref())?,
        tagger: load_tagger(&cfg.tagger)?,
        text: load_text_resources(cfg)?,
        ad_domains: load_ad_domains(cfg.ad_domains.as_deref())?,
    })
}
