//! Thread-pool job runner. Results are collected in job-index order, so
//! every artifact is identical whatever `--jobs` is.

use std::sync::Arc;

use rayon::prelude::*;
use veritag_core::jobs::Jobs;

use crate::error::{AppError, AppResult};

#[derive(Clone)]
pub struct RayonJobs {
    pool: Arc<rayon::ThreadPool>,
}

impl RayonJobs {
    /// `threads = 0` lets rayon pick (one per core).
    pub fn new(threads: usize) -> AppResult<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| AppError::internal(format!("thread pool: {e}")))?;
        Ok(RayonJobs { pool: Arc::new(pool) })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Jobs for RayonJobs {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}
