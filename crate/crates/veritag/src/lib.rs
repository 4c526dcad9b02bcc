//! Corpus IO, file formats and the `veritag` command line over the
//! algorithms in `veritag-core`.

pub mod cli;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod formats;
pub mod jobs;
pub mod model_file;
pub mod resources;
pub mod workflow;

pub use error::{AppError, AppResult, ErrorKind};
