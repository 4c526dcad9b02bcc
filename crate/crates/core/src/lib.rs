//! Topic-agnostic (TAG) classification of news web pages.
//!
//! This crate holds everything that is pure computation: the lenient HTML
//! parser and web-markup features, tokenization and the linguistic feature
//! groups, feature assembly and scaling, the importance-based feature
//! selection, the classifiers, and the evaluation protocols. It is `no_std`
//! and only needs `alloc`; file IO and the command-line tool live in the
//! `veritag` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod html;
pub mod jobs;
pub mod label;
pub mod markup;
pub mod math;
pub mod models;
pub mod rng;
pub mod selection;
pub mod text;

pub use error::{Error, Result};
pub use label::Label;
