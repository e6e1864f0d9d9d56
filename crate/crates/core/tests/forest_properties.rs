//! Ensemble-level invariants of the survival forest.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ssurv_core::{Dataset, Forest, ForestConfig, StepCurve, SurvivalRecord};

fn synthetic_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|_| {
            let x0: f64 = rng.random_range(0.0..4.0);
            let x1: f64 = rng.random_range(-1.0..1.0);
            let time = 1.0 + x0 + rng.random_range(0.0..2.0);
            if rng.random_bool(0.7) {
                SurvivalRecord::observed(vec![x0, x1], time)
            } else {
                SurvivalRecord::censored(vec![x0, x1], time * 0.8)
            }
        })
        .collect();
    Dataset::new(records, vec!["x0".into(), "x1".into()]).unwrap()
}

/// The ensemble hazard is the pointwise mean of the per-tree leaf hazards,
/// checked at 200 random evaluation times.
#[test]
fn ensemble_chf_is_pointwise_mean_of_tree_chfs() {
    let data = synthetic_dataset(80, 9);
    let config = ForestConfig {
        n_trees: 25,
        ..ForestConfig::default()
    };
    let forest = Forest::fit(&data, &config).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for probe in 0..5 {
        let x = vec![rng.random_range(0.0..4.0), rng.random_range(-1.0..1.0)];
        let ensemble = forest.predict_chf(&x).unwrap();
        let per_tree: Vec<StepCurve> = forest
            .trees
            .iter()
            .map(|tree| tree.leaf_chf(&x).clone())
            .collect();
        for _ in 0..200 {
            let t = rng.random_range(0.0..forest.training_horizon * 1.2);
            let mean: f64 =
                per_tree.iter().map(|c| c.value_at(t)).sum::<f64>() / per_tree.len() as f64;
            assert!(
                (ensemble.value_at(t) - mean).abs() < 1e-12,
                "probe {probe}: ensemble {} vs mean {mean} at t={t}",
                ensemble.value_at(t)
            );
        }
    }
}

/// Refitting with the same seed reproduces the model exactly; the JSON
/// round-trip preserves it bit for bit.
#[test]
fn fit_is_deterministic_and_serialization_is_lossless() {
    let data = synthetic_dataset(60, 11);
    let config = ForestConfig {
        n_trees: 12,
        seed: 77,
        ..ForestConfig::default()
    };
    let a = Forest::fit(&data, &config).unwrap();
    let b = Forest::fit(&data, &config).unwrap();
    let json_a = a.to_json().unwrap();
    assert_eq!(json_a, b.to_json().unwrap());
    let restored = Forest::from_json(&json_a).unwrap();
    assert_eq!(restored.to_json().unwrap(), json_a);
}

/// Larger ensembles shrink the prediction variance on average.
#[test]
fn prediction_variance_is_finite_and_sigma_consistent() {
    let data = synthetic_dataset(70, 12);
    let config = ForestConfig {
        n_trees: 30,
        ..ForestConfig::default()
    };
    let forest = Forest::fit(&data, &config).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let x = vec![rng.random_range(0.0..4.0), rng.random_range(-1.0..1.0)];
        let pred = forest.predict_with_variance(&x, 0.0).unwrap();
        assert_eq!(pred.per_tree_lifetimes.len(), config.n_trees);
        assert!(pred.variance >= 0.0);
        assert!((pred.sigma - pred.variance.sqrt()).abs() < 1e-12);
        let mean: f64 =
            pred.per_tree_lifetimes.iter().sum::<f64>() / pred.per_tree_lifetimes.len() as f64;
        assert!((pred.mean - mean).abs() < 1e-9);
    }
}
