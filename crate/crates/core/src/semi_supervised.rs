//! Training strategies over observed, censored and unlabeled data: zero-time
//! censoring of the unlabeled set, a self-training wrapper with a variance
//! stopping criterion, and its censoring-time-corrected variant.

use crate::data::{Dataset, SupervisionStatus, SurvivalRecord};
use crate::error::{Error, Result};
use crate::forest::{Forest, ForestConfig};
use crate::seed::derive_seed;

/// Audit trail of a self-training run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfTrainState {
    /// Final labeled set the returned model was trained on.
    pub labeled: Dataset,
    /// Records never admitted.
    pub pool: Dataset,
    /// Maximal admissible prediction variance, fixed in the first
    /// iteration; stays `None` for the censoring-time-corrected variant.
    pub variance_threshold: Option<f64>,
    /// Number of loop iterations that fitted a model.
    pub iteration: usize,
    /// `(iteration, records added)` for every augmenting iteration.
    pub augmentation_log: Vec<(usize, usize)>,
}

fn check_statuses(data: &Dataset, allowed: &[SupervisionStatus]) -> Result<()> {
    if data.records.iter().any(|r| !allowed.contains(&r.status)) {
        return Err(Error::UnsupportedStatus);
    }
    Ok(())
}

/// Treats every unlabeled record as censored at time zero and fits a plain
/// forest on the union.
pub fn rsf_plus_ud(ldata: &Dataset, udata: &Dataset, config: &ForestConfig) -> Result<Forest> {
    check_statuses(ldata, &[SupervisionStatus::Observed, SupervisionStatus::Censored])?;
    check_statuses(udata, &[SupervisionStatus::Unlabeled])?;
    let mut records = ldata.records.clone();
    records.extend(
        udata.records.iter().map(|r| SurvivalRecord::censored(r.features.clone(), 0.0)),
    );
    let union = Dataset::new(records, ldata.feature_names.clone())?;
    Forest::fit(&union, config)
}

/// Nearest-rank first quartile: the value at 1-based index `ceil(0.25 n)`
/// of an ascending-sorted list.
fn first_quartile(sorted: &[f64]) -> f64 {
    debug_assert!(!sorted.is_empty());
    let idx = ((0.25 * sorted.len() as f64).ceil() as usize).max(1);
    sorted[idx - 1]
}

/// How many of the variance-sorted predictions to admit: at most `quota`,
/// and only while the variance stays strictly below the threshold.
fn st_admission_count(sorted_variances: &[f64], threshold: f64, quota: usize) -> usize {
    sorted_variances.iter().take(quota).take_while(|&&v| v < threshold).count()
}

struct PoolPrediction {
    /// Position in the current pool.
    pool_idx: usize,
    mean: f64,
    variance: f64,
    sigma: f64,
}

/// Walks the variance-sorted pool and admits everything strictly before the
/// first censored record whose censoring time exceeds `mean + 2 sigma`.
fn cct_admission_count(sorted: &[PoolPrediction], pool: &Dataset) -> usize {
    for (i, p) in sorted.iter().enumerate() {
        let rec = &pool.records[p.pool_idx];
        if rec.status == SupervisionStatus::Censored && rec.time > p.mean + 2.0 * p.sigma {
            return i;
        }
    }
    sorted.len()
}

fn predict_pool(forest: &Forest, pool: &Dataset) -> Result<Vec<PoolPrediction>> {
    let mut preds = Vec::with_capacity(pool.len());
    for (i, rec) in pool.records.iter().enumerate() {
        let p = forest.predict_with_variance(&rec.features, 0.0)?;
        preds.push(PoolPrediction { pool_idx: i, mean: p.mean, variance: p.variance, sigma: p.sigma });
    }
    // stable sort keeps pool order among tied variances
    preds.sort_by(|a, b| a.variance.total_cmp(&b.variance));
    Ok(preds)
}

/// Moves the first `count` variance-sorted records out of the pool into the
/// labeled set, pseudo-labeled as observed with time equal to the
/// prediction. Admitted times are final and never re-predicted.
fn admit(labeled: &mut Dataset, pool: &mut Dataset, sorted: &[PoolPrediction], count: usize) {
    for p in &sorted[..count] {
        let rec = &pool.records[p.pool_idx];
        labeled
            .records
            .push(SurvivalRecord::observed(rec.features.clone(), p.mean.max(0.0)));
    }
    let mut removed: Vec<usize> = sorted[..count].iter().map(|p| p.pool_idx).collect();
    removed.sort_unstable();
    for idx in removed.into_iter().rev() {
        pool.records.remove(idx);
    }
}

/// Self-trained survival forest over labeled plus unlabeled data.
///
/// Repeatedly fits a forest on the labeled set and admits the most
/// confident (lowest prediction variance) pool records, capped at 10% of
/// the initial pool per iteration. The first iteration fixes the variance
/// threshold at the first quartile of the observed variances; the loop
/// ends when an iteration admits nothing.
pub fn st_rsf(
    ldata: &Dataset,
    udata: &Dataset,
    config: &ForestConfig,
) -> Result<(Forest, SelfTrainState)> {
    check_statuses(ldata, &[SupervisionStatus::Observed, SupervisionStatus::Censored])?;
    check_statuses(udata, &[SupervisionStatus::Unlabeled])?;

    let quota = ((0.10 * udata.len() as f64).ceil() as usize).max(usize::from(!udata.is_empty()));
    let mut labeled = ldata.clone();
    let mut pool = udata.clone();
    let mut threshold: Option<f64> = None;
    let mut iteration = 0usize;
    let mut log = Vec::new();

    while !pool.is_empty() {
        let forest = Forest::fit(&labeled, &config.with_seed(derive_seed(config.seed, iteration as u64)))?;
        let sorted = predict_pool(&forest, &pool)?;
        iteration += 1;

        let variances: Vec<f64> = sorted.iter().map(|p| p.variance).collect();
        let thr = *threshold.get_or_insert_with(|| first_quartile(&variances));
        let count = st_admission_count(&variances, thr, quota);
        if count == 0 {
            break;
        }
        admit(&mut labeled, &mut pool, &sorted, count);
        log.push((iteration - 1, count));
    }

    let forest = Forest::fit(&labeled, config)?;
    Ok((
        forest,
        SelfTrainState {
            labeled,
            pool,
            variance_threshold: threshold,
            iteration,
            augmentation_log: log,
        },
    ))
}

/// Self-trained survival forest corrected with censoring times.
///
/// The model is fitted on observed records only; censored and unlabeled
/// records share one pool. Each iteration admits the variance-sorted
/// prefix up to (excluding) the first censored record whose censoring time
/// lies above the `mean + 2 sigma` tolerance bound.
pub fn st_rsf_cct(
    observed: &Dataset,
    censored: &Dataset,
    udata: &Dataset,
    config: &ForestConfig,
) -> Result<(Forest, SelfTrainState)> {
    check_statuses(observed, &[SupervisionStatus::Observed])?;
    check_statuses(censored, &[SupervisionStatus::Censored])?;
    check_statuses(udata, &[SupervisionStatus::Unlabeled])?;

    let mut labeled = observed.clone();
    let mut pool = observed.empty_like();
    pool.records.extend(censored.records.iter().cloned());
    pool.records.extend(udata.records.iter().cloned());
    let mut iteration = 0usize;
    let mut log = Vec::new();

    while !pool.is_empty() {
        let forest = Forest::fit(&labeled, &config.with_seed(derive_seed(config.seed, iteration as u64)))?;
        let sorted = predict_pool(&forest, &pool)?;
        iteration += 1;

        let count = cct_admission_count(&sorted, &pool);
        if count == 0 {
            break;
        }
        admit(&mut labeled, &mut pool, &sorted, count);
        log.push((iteration - 1, count));
    }

    let forest = Forest::fit(&labeled, config)?;
    Ok((
        forest,
        SelfTrainState {
            labeled,
            pool,
            variance_threshold: None,
            iteration,
            augmentation_log: log,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeled_dataset(n: usize) -> Dataset {
        let records = (0..n)
            .map(|i| {
                let t = (i + 1) as f64;
                let f = vec![(i % 5) as f64, (i * 3 % 7) as f64];
                if i % 4 == 3 {
                    SurvivalRecord::censored(f, t)
                } else {
                    SurvivalRecord::observed(f, t)
                }
            })
            .collect();
        Dataset::new(records, vec!["a".into(), "b".into()]).unwrap()
    }

    fn unlabeled_dataset(n: usize) -> Dataset {
        let records = (0..n)
            .map(|i| SurvivalRecord::unlabeled(vec![(i % 3) as f64, (i * 5 % 11) as f64]))
            .collect();
        Dataset::new(records, vec!["a".into(), "b".into()]).unwrap()
    }

    fn small_config() -> ForestConfig {
        ForestConfig { n_trees: 10, min_leaf_events: 2, seed: 5, ..Default::default() }
    }

    #[test]
    fn quartile_is_nearest_rank() {
        let vars = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
        assert_eq!(first_quartile(&vars), 0.2);
        assert_eq!(first_quartile(&[7.0]), 7.0);
        assert_eq!(first_quartile(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2.0);
    }

    #[test]
    fn st_admission_respects_quota_and_strict_threshold() {
        let vars = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
        // quota of ceil(0.10 * 8) = 1 admits only the lowest variance
        assert_eq!(st_admission_count(&vars, 0.2, 1), 1);
        assert_eq!(st_admission_count(&vars, 0.35, 10), 3);
        // all variances equal to the threshold: strict `<` admits none
        assert_eq!(st_admission_count(&[0.5, 0.5, 0.5], 0.5, 2), 0);
    }

    #[test]
    fn cct_admission_stops_at_first_violating_censored_record() {
        let mk = |status, time| SurvivalRecord { features: vec![], time, status };
        let pool = Dataset::new(
            vec![
                mk(SupervisionStatus::Unlabeled, 0.0),
                mk(SupervisionStatus::Censored, 3.0),
                mk(SupervisionStatus::Censored, 9.0),
            ],
            vec![],
        )
        .unwrap();
        let sorted = vec![
            PoolPrediction { pool_idx: 0, mean: 5.0, variance: 0.01, sigma: 0.1 },
            PoolPrediction { pool_idx: 1, mean: 4.0, variance: 0.04, sigma: 0.2 },
            PoolPrediction { pool_idx: 2, mean: 4.0, variance: 1.0, sigma: 1.0 },
        ];
        // third record violates: 9 > 4 + 2; the two before it are admitted
        assert_eq!(cct_admission_count(&sorted, &pool), 2);

        // a violating censored record in front blocks everything
        let sorted_rev = vec![
            PoolPrediction { pool_idx: 2, mean: 4.0, variance: 1.0, sigma: 1.0 },
            PoolPrediction { pool_idx: 0, mean: 5.0, variance: 2.0, sigma: 1.4 },
        ];
        assert_eq!(cct_admission_count(&sorted_rev, &pool), 0);
    }

    #[test]
    fn cct_admits_everything_without_censored_sentinels() {
        let pool = unlabeled_dataset(4);
        let sorted: Vec<PoolPrediction> = (0..4)
            .map(|i| PoolPrediction { pool_idx: i, mean: 1.0, variance: 0.1, sigma: 0.3 })
            .collect();
        assert_eq!(cct_admission_count(&sorted, &pool), 4);
    }

    #[test]
    fn empty_udata_reduces_every_strategy_to_plain_fit() {
        let ldata = labeled_dataset(16);
        let empty_u = unlabeled_dataset(0);
        let config = small_config();
        let plain = Forest::fit(&ldata, &config).unwrap();

        assert_eq!(rsf_plus_ud(&ldata, &empty_u, &config).unwrap(), plain);

        let (forest, state) = st_rsf(&ldata, &empty_u, &config).unwrap();
        assert_eq!(forest, plain);
        assert!(state.augmentation_log.is_empty());
        assert_eq!(state.iteration, 0);

        let observed = Dataset::new(
            ldata.records.iter().filter(|r| r.is_event()).cloned().collect(),
            ldata.feature_names.clone(),
        )
        .unwrap();
        let plain_obs = Forest::fit(&observed, &config).unwrap();
        let empty_c = observed.empty_like();
        let (forest, state) = st_rsf_cct(&observed, &empty_c, &empty_u, &config).unwrap();
        assert_eq!(forest, plain_obs);
        assert!(state.augmentation_log.is_empty());
    }

    #[test]
    fn self_training_conserves_records() {
        let ldata = labeled_dataset(20);
        let udata = unlabeled_dataset(10);
        let config = small_config();

        let (_, state) = st_rsf(&ldata, &udata, &config).unwrap();
        assert_eq!(state.labeled.len() + state.pool.len(), ldata.len() + udata.len());
        let added: usize = state.augmentation_log.iter().map(|&(_, c)| c).sum();
        assert_eq!(added, udata.len() - state.pool.len());
        assert!(state.iteration <= udata.len() + 1);
        for rec in &state.labeled.records {
            assert!(rec.status.is_labeled());
            assert!(rec.time >= 0.0 && rec.time.is_finite());
        }

        let observed = Dataset::new(
            ldata.records.iter().filter(|r| r.is_event()).cloned().collect(),
            ldata.feature_names.clone(),
        )
        .unwrap();
        let censored = Dataset::new(
            ldata.records.iter().filter(|r| !r.is_event()).cloned().collect(),
            ldata.feature_names.clone(),
        )
        .unwrap();
        let pool_size = censored.len() + udata.len();
        let (_, state) = st_rsf_cct(&observed, &censored, &udata, &config).unwrap();
        assert_eq!(state.labeled.len() + state.pool.len(), observed.len() + pool_size);
        let added: usize = state.augmentation_log.iter().map(|&(_, c)| c).sum();
        assert_eq!(added, pool_size - state.pool.len());
        assert!(state.iteration <= pool_size + 1);
        assert_eq!(state.variance_threshold, None);
        for rec in &state.labeled.records {
            assert_eq!(rec.status, SupervisionStatus::Observed);
        }
    }

    #[test]
    fn cct_has_no_per_iteration_cap() {
        // all-unlabeled pool, no censored sentinels: everything can go in
        // one pass, while st_rsf is capped at ceil(0.10 * pool)
        let ldata = labeled_dataset(20);
        let observed = Dataset::new(
            ldata.records.iter().filter(|r| r.is_event()).cloned().collect(),
            ldata.feature_names.clone(),
        )
        .unwrap();
        let udata = unlabeled_dataset(10);
        let config = small_config();
        let empty_c = observed.empty_like();
        let (_, state) = st_rsf_cct(&observed, &empty_c, &udata, &config).unwrap();
        assert_eq!(state.augmentation_log, vec![(0, 10)]);
        assert_eq!(state.pool.len(), 0);

        let (_, st_state) = st_rsf(&ldata, &udata, &config).unwrap();
        for &(_, count) in &st_state.augmentation_log {
            assert!(count <= 1); // ceil(0.10 * 10) = 1
        }
    }

    #[test]
    fn strategies_reject_misplaced_statuses() {
        let ldata = labeled_dataset(8);
        let udata = unlabeled_dataset(4);
        let config = small_config();
        assert_eq!(
            rsf_plus_ud(&udata, &udata, &config),
            Err(Error::UnsupportedStatus)
        );
        assert_eq!(st_rsf(&ldata, &ldata, &config).err(), Some(Error::UnsupportedStatus));
        assert_eq!(
            st_rsf_cct(&ldata, &udata, &udata, &config).err(),
            Some(Error::UnsupportedStatus)
        );
    }
}
