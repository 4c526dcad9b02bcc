//! Pluggable execution of independent jobs (trees, folds, grid cells).
//!
//! Results always come back in job-index order, so output never depends on
//! the scheduler. The std crate provides a thread-pool implementation.

use alloc::vec::Vec;

pub trait Jobs: Sync {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Jobs for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
