//! Shared fixtures and synthetic data for the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::Rng as _;
use veritag::config::RunConfig;
use veritag::corpus_io::load_manifest;
use veritag::jobs::RayonJobs;
use veritag::resources::load_resources;
use veritag::workflow::{extract_samples, schema_from_config};
use veritag_core::features::FeatureSchema;
use veritag_core::models::Sample;
use veritag_core::rng::from_seed;

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// Extract a corpus with the given configuration.
pub fn corpus_samples(dir: &Path, cfg: &RunConfig) -> (FeatureSchema, Vec<Sample>) {
    let m = load_manifest(dir, cfg.year_range).expect("fixture corpus loads");
    let res = load_resources(cfg).expect("resources load");
    let schema = schema_from_config(cfg, &res).expect("schema resolves");
    let jobs = RayonJobs::new(0).unwrap();
    let samples = extract_samples(&m.load_documents().unwrap(), &schema, &res, &jobs).unwrap();
    (schema, samples)
}

/// 2-D points with geometric margin at least 1 from the line x0 + x1 = 0.
pub fn margin_separated(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = from_seed(seed);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    while x.len() < n {
        let p = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let d = (p[0] + p[1]) / 2f64.sqrt();
        if d.abs() >= 1.0 {
            x.push(p.to_vec());
            y.push(usize::from(d > 0.0));
        }
    }
    (x, y)
}

/// XOR of the signs of two uniform coordinates.
pub fn xor(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = from_seed(seed);
    (0..n)
        .map(|_| {
            let p: Vec<f64> = vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let c = usize::from((p[0] > 0.0) != (p[1] > 0.0));
            (p, c)
        })
        .unzip()
}

/// Column 0 copies the label, column 1 is constant, the rest are uniform noise.
pub fn selection_suite(n: usize, noise: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = from_seed(seed);
    let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let x = y
        .iter()
        .map(|c| {
            let mut row = vec![*c as f64, 5.0];
            row.extend((0..noise).map(|_| rng.gen_range(0.0..1.0)));
            row
        })
        .collect();
    (x, y)
}
