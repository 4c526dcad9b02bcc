//! Tokenization and the three linguistic feature groups: morphological
//! (part-of-speech counts), psychological (dictionary categories) and
//! readability.

pub mod dictionary;
pub mod pos;
pub mod readability;
pub mod resources;
pub mod syllables;
pub mod tokenize;

pub use dictionary::{dictionary_scores, CategoryDictionary};
pub use pos::{morphological_features, pos_tag, PerceptronTagger, PosTagCounts, PosTagger, RuleTagger, Tagger};
pub use readability::{readability_features, ReadabilityScores};
pub use resources::TextResources;
pub use syllables::count_syllables;
pub use tokenize::{tokenize, tokenize_with, TokenizedText};
