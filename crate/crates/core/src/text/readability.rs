//! Readability indices and the surface counts they are built from.
//!
//! Every index is computed from this crate's own tokenizer and syllable
//! counter, so values are reproducible but will not match other tools
//! digit for digit. Ratios with a zero denominator are 0.

use alloc::collections::BTreeSet;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::resources::TextResources;
use super::syllables::count_syllables;
use super::tokenize::TokenizedText;
use crate::math::ratio;

/// Feature names, in [`ReadabilityScores::values`] order.
pub const READABILITY_FEATURE_NAMES: [&str; 19] = [
    "FRI", "FKI", "MSI", "GFI", "CLI", "ARI", "LWI", "WS", "W", "STC", "CH", "SY", "LX", "CW.cap",
    "CW.complex", "DW", "LW", "URL", "PS",
];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReadabilityScores {
    /// Flesch reading ease.
    pub fri: f64,
    /// Flesch-Kincaid grade.
    pub fki: f64,
    /// SMOG.
    pub msi: f64,
    /// Gunning fog.
    pub gfi: f64,
    /// Coleman-Liau.
    pub cli: f64,
    /// Automated readability index.
    pub ari: f64,
    /// Linsear Write.
    pub lwi: f64,
    /// Words per sentence.
    pub ws: f64,
    pub w: u32,
    pub stc: u32,
    pub ch: u32,
    pub sy: u32,
    /// Distinct lowercased tokens.
    pub lx: u32,
    /// Tokens starting with an uppercase letter.
    pub cw_cap: u32,
    /// Tokens with three or more syllables.
    pub cw_complex: u32,
    /// Tokens not on the easy-word list.
    pub dw: u32,
    /// Tokens with more than six letters.
    pub lw: u32,
    pub url: u32,
    /// Percentage of stopwords.
    pub ps: f64,
}

impl ReadabilityScores {
    pub fn values(&self) -> [f64; 19] {
        [
            self.fri,
            self.fki,
            self.msi,
            self.gfi,
            self.cli,
            self.ari,
            self.lwi,
            self.ws,
            f64::from(self.w),
            f64::from(self.stc),
            f64::from(self.ch),
            f64::from(self.sy),
            f64::from(self.lx),
            f64::from(self.cw_cap),
            f64::from(self.cw_complex),
            f64::from(self.dw),
            f64::from(self.lw),
            f64::from(self.url),
            self.ps,
        ]
    }
}

fn letter_count(token: &str) -> usize {
    token.chars().filter(|c| c.is_alphabetic()).count()
}

/// Linsear Write over the first 100 words: 1 point per word under three
/// syllables, 3 points otherwise, divided by the sentences touching the
/// sample; halved if above 20, else `(r - 2) / 2`.
fn linsear_write(tokenized: &TokenizedText, syllables: &[usize]) -> f64 {
    let sample = tokenized.tokens.len().min(100);
    if sample == 0 {
        return 0.0;
    }
    let points: usize = syllables[..sample]
        .iter()
        .map(|&s| if s >= 3 { 3 } else { 1 })
        .sum();
    let sentences = tokenized.sentences.iter().filter(|r| r.start < sample).count();
    let r = ratio(points as f64, sentences as f64);
    if r > 20.0 {
        r / 2.0
    } else {
        (r - 2.0) / 2.0
    }
}

pub fn readability_features(tokenized: &TokenizedText, resources: &TextResources) -> ReadabilityScores {
    let tokens = &tokenized.tokens;
    let syllables: alloc::vec::Vec<usize> = tokens.iter().map(|t| count_syllables(t)).collect();
    let w = tokens.len() as f64;
    let stc = tokenized.sentences.len() as f64;
    let ch = tokenized.char_count as f64;
    let sy: usize = syllables.iter().sum();
    let complex = syllables.iter().filter(|&&s| s >= 3).count();
    let letters: usize = tokens.iter().map(|t| letter_count(t)).sum();
    let lexicon: BTreeSet<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let cw_cap = tokens
        .iter()
        .filter(|t| t.chars().next().is_some_and(char::is_uppercase))
        .count();
    let dw = tokens.iter().filter(|t| !resources.is_easy_word(t)).count();
    let lw = tokens.iter().filter(|t| letter_count(t) > 6).count();
    let stop = tokens.iter().filter(|t| resources.is_stopword(t)).count();

    let wps = ratio(w, stc);
    let spw = ratio(sy as f64, w);
    let nonempty = w > 0.0 && stc > 0.0;
    let fri = if nonempty { 206.835 - 1.015 * wps - 84.6 * spw } else { 0.0 };
    let fki = if nonempty { 0.39 * wps + 11.8 * spw - 15.59 } else { 0.0 };
    let msi = if stc > 0.0 {
        1.0430 * libm::sqrt(complex as f64 * 30.0 / stc) + 3.1291
    } else {
        0.0
    };
    let gfi = if nonempty { 0.4 * (wps + 100.0 * ratio(complex as f64, w)) } else { 0.0 };
    let cli = if nonempty {
        let l = 100.0 * ratio(letters as f64, w);
        let s = 100.0 * ratio(stc, w);
        0.0588 * l - 0.296 * s - 15.8
    } else {
        0.0
    };
    let ari = if nonempty { 4.71 * ratio(ch, w) + 0.5 * wps - 21.43 } else { 0.0 };
    let lwi = if nonempty { linsear_write(tokenized, &syllables) } else { 0.0 };

    ReadabilityScores {
        fri,
        fki,
        msi,
        gfi,
        cli,
        ari,
        lwi,
        ws: wps,
        w: tokens.len() as u32,
        stc: tokenized.sentences.len() as u32,
        ch: tokenized.char_count as u32,
        sy: sy as u32,
        lx: lexicon.len() as u32,
        cw_cap: cw_cap as u32,
        cw_complex: complex as u32,
        dw: dw as u32,
        lw: lw as u32,
        url: tokenized.url_count() as u32,
        ps: 100.0 * ratio(stop as f64, w),
    }
}
