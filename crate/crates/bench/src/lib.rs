//! Synthetic data generation shared by the benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use ssurv_core::{Dataset, SurvivalRecord};

/// Right-censored dataset with `n` records and `p` features whose first
/// feature drives the survival time.
pub fn synthetic(n: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|_| {
            let features: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
            let time = (2.0 + features[0]) * rng.random_range(0.5..1.5);
            if rng.random_bool(0.7) {
                SurvivalRecord::observed(features, time)
            } else {
                SurvivalRecord::censored(features, time * 0.8)
            }
        })
        .collect();
    let names = (0..p).map(|f| format!("x{f}")).collect();
    Dataset::new(records, names).unwrap()
}
