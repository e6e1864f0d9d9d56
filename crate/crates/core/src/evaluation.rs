//! Evaluation protocol: Harrell concordance index, stratified unlabeled-set
//! generation, repeated stratified cross-validation over labeled-fraction
//! grids, curve-AUC aggregation, and Friedman-Nemenyi ranking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, SupervisionStatus, SurvivalRecord};
use crate::error::{Error, Result};
use crate::forest::{Forest, ForestConfig};
use crate::seed::derive_seed;
use crate::semi_supervised::{rsf_plus_ud, st_rsf, st_rsf_cct};

/// Training strategy evaluated by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Rsf,
    RsfUd,
    StRsf,
    StRsfCct,
    /// Upper reference: trains on the complete labeled training folds,
    /// ignoring the fraction grid.
    MaxReference,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Rsf, Method::RsfUd, Method::StRsf, Method::StRsfCct, Method::MaxReference];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rsf => "RSF",
            Method::RsfUd => "RSF+UD",
            Method::StRsf => "ST-RSF",
            Method::StRsfCct => "ST-RSF+CCT",
            Method::MaxReference => "MAX-REFERENCE",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method {s:?}")))
    }
}

/// One full repeated-CV experiment for a single method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    /// Labeled fractions of the training split, strictly increasing in (0,1).
    pub fractions: Vec<f64>,
    pub n_folds: usize,
    pub n_repeats: usize,
    pub method: Method,
    pub forest_config: ForestConfig,
    pub seed: u64,
}

/// Default labeled-fraction grid: unlabeled fractions 5% to 75% in steps
/// of 10%.
pub fn default_fractions() -> Vec<f64> {
    vec![0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95]
}

impl ExperimentPlan {
    pub fn new(method: Method) -> Self {
        Self {
            fractions: default_fractions(),
            n_folds: 5,
            n_repeats: 10,
            method,
            forest_config: ForestConfig::default(),
            seed: 42,
        }
    }

    fn validate(&self, data: &Dataset) -> Result<()> {
        self.forest_config.validate()?;
        if self.n_folds < 2 || self.n_folds > data.len() {
            return Err(Error::InvalidConfig(format!(
                "n_folds must be in [2, {}]",
                data.len()
            )));
        }
        if self.n_repeats < 1 {
            return Err(Error::InvalidConfig("n_repeats must be >= 1".into()));
        }
        if self.fractions.len() < 1 {
            return Err(Error::InvalidConfig("at least one fraction required".into()));
        }
        for w in self.fractions.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidConfig("fractions must be strictly increasing".into()));
            }
        }
        if self.fractions.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            return Err(Error::InvalidConfig("fractions must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// One grid cell of the (fraction x repeat x fold) experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub fraction: f64,
    pub repeat: usize,
    pub fold: usize,
    /// `None` when the cell was skipped (degenerate split on extreme
    /// fractions); excluded from aggregation.
    pub c_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionSummary {
    pub fraction: f64,
    pub mean: f64,
    /// Population standard deviation over the non-missing cells.
    pub std: f64,
    pub n_cells: usize,
}

/// Augmentation counts of one self-training cell, for learning-curve output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationTrace {
    pub fraction: f64,
    pub repeat: usize,
    pub fold: usize,
    pub log: Vec<(usize, usize)>,
}

/// C-index as a function of labeled fraction, with its aggregate curve-AUC.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveResult {
    pub cells: Vec<Cell>,
    pub summaries: Vec<FractionSummary>,
    /// Normalized area under the mean C-index curve, on Table-style
    /// percentage scale.
    pub curve_auc: f64,
    /// Standard deviation of the per-repeat curve AUCs.
    pub auc_std: f64,
    pub augmentation: Vec<AugmentationTrace>,
}

/// Harrell concordance index over `(time, status, predicted lifetime)`.
///
/// A pair is comparable when both subjects are observed with distinct
/// times, or when the observed time of one is no larger than the censored
/// time of the other. A comparable pair is concordant when the subject
/// with the smaller actual time also has the smaller predicted lifetime;
/// prediction ties count one half.
pub fn c_index(subjects: &[(f64, SupervisionStatus, f64)]) -> Result<f64> {
    if subjects.iter().any(|(_, s, _)| !s.is_labeled()) {
        return Err(Error::UnsupportedStatus);
    }
    let mut comparable = 0u64;
    let mut concordant = 0.0f64;
    for i in 0..subjects.len() {
        for j in (i + 1)..subjects.len() {
            let (ti, si, pi) = subjects[i];
            let (tj, sj, pj) = subjects[j];
            // identify the pair member with the smaller actual time
            let (ts, ps, tl, pl, ss) =
                if ti <= tj { (ti, pi, tj, pj, si) } else { (tj, pj, ti, pi, sj) };
            let usable = match (ss, ts == tl) {
                // the earlier subject must be an event; tied observed
                // times cannot be ordered
                (SupervisionStatus::Observed, false) => true,
                (SupervisionStatus::Observed, true) => {
                    // tie: comparable only against a censored subject,
                    // which outlives the event by convention
                    let other = if ti <= tj { sj } else { si };
                    other == SupervisionStatus::Censored
                }
                _ => false,
            };
            if !usable {
                continue;
            }
            comparable += 1;
            if ps < pl {
                concordant += 1.0;
            } else if ps == pl {
                concordant += 0.5;
            }
        }
    }
    if comparable == 0 {
        return Err(Error::NoComparablePairs);
    }
    Ok(concordant / comparable as f64)
}

/// Splits a labeled training set into a labeled part and an artificially
/// unlabeled part, stratified by status so both sides keep the same
/// observed/censored mix. Selected records lose their time and status.
pub fn make_unlabeled_split(
    train: &Dataset,
    unlabeled_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(unlabeled_fraction > 0.0 && unlabeled_fraction < 1.0) {
        return Err(Error::InvalidConfig("unlabeled_fraction must lie in (0, 1)".into()));
    }
    if train.records.iter().any(|r| !r.status.is_labeled()) {
        return Err(Error::UnsupportedStatus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = vec![false; train.len()];
    for status in [SupervisionStatus::Observed, SupervisionStatus::Censored] {
        let group: Vec<usize> = (0..train.len())
            .filter(|&i| train.records[i].status == status)
            .collect();
        let k = (unlabeled_fraction * group.len() as f64).round() as usize;
        for idx in rand::seq::index::sample(&mut rng, group.len(), k.min(group.len())) {
            selected[group[idx]] = true;
        }
    }
    let mut ldata = train.empty_like();
    let mut udata = train.empty_like();
    for (i, rec) in train.records.iter().enumerate() {
        if selected[i] {
            udata.records.push(SurvivalRecord::unlabeled(rec.features.clone()));
        } else {
            ldata.records.push(rec.clone());
        }
    }
    if ldata.is_empty() || ldata.max_observed_time().is_none() {
        return Err(Error::DegenerateSplit);
    }
    Ok((ldata, udata))
}

// stream tags keep fold shuffling and cell seeds on distinct streams
const TAG_FOLD: u64 = 1;
const TAG_CELL: u64 = 2;

/// Stratified fold assignment: each status group is shuffled and dealt
/// round-robin, so every fold keeps roughly the training mix.
fn assign_folds(data: &Dataset, n_folds: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; data.len()];
    for status in [SupervisionStatus::Observed, SupervisionStatus::Censored] {
        let mut group: Vec<usize> = (0..data.len())
            .filter(|&i| data.records[i].status == status)
            .collect();
        group.shuffle(&mut rng);
        for (pos, idx) in group.into_iter().enumerate() {
            fold_of[idx] = pos % n_folds;
        }
    }
    fold_of
}

fn is_missing_cell_error(e: &Error) -> bool {
    matches!(
        e,
        Error::DegenerateSplit
            | Error::NoEventsToFit
            | Error::NoComparablePairs
            | Error::EmptyRiskSet
    )
}

fn run_cell(
    data: &Dataset,
    plan: &ExperimentPlan,
    fold_of: &[usize],
    repeat: usize,
    fold: usize,
    fraction_idx: usize,
) -> Result<(f64, Vec<(usize, usize)>)> {
    let fraction = plan.fractions[fraction_idx];
    let mut train = data.empty_like();
    let mut test = Vec::new();
    for (i, rec) in data.records.iter().enumerate() {
        if fold_of[i] == fold {
            test.push(rec);
        } else {
            train.records.push(rec.clone());
        }
    }

    // MAX-REFERENCE ignores the fraction, so its seed must not depend on it
    let cell_seed = if plan.method == Method::MaxReference {
        derive_seed(derive_seed(derive_seed(plan.seed, TAG_CELL), repeat as u64), fold as u64)
    } else {
        derive_seed(
            derive_seed(
                derive_seed(derive_seed(plan.seed, TAG_CELL), repeat as u64),
                fold as u64,
            ),
            fraction_idx as u64,
        )
    };
    let split_seed = derive_seed(cell_seed, 1);
    let config = plan.forest_config.with_seed(derive_seed(cell_seed, 2));

    let mut augmentation = Vec::new();
    let forest = match plan.method {
        Method::MaxReference => Forest::fit(&train, &config)?,
        Method::Rsf => {
            let (ldata, _) = make_unlabeled_split(&train, 1.0 - fraction, split_seed)?;
            Forest::fit(&ldata, &config)?
        }
        Method::RsfUd => {
            let (ldata, udata) = make_unlabeled_split(&train, 1.0 - fraction, split_seed)?;
            rsf_plus_ud(&ldata, &udata, &config)?
        }
        Method::StRsf => {
            let (ldata, udata) = make_unlabeled_split(&train, 1.0 - fraction, split_seed)?;
            let (forest, state) = st_rsf(&ldata, &udata, &config)?;
            augmentation = state.augmentation_log;
            forest
        }
        Method::StRsfCct => {
            let (ldata, udata) = make_unlabeled_split(&train, 1.0 - fraction, split_seed)?;
            let mut observed = ldata.empty_like();
            let mut censored = ldata.empty_like();
            for rec in ldata.records {
                if rec.is_event() {
                    observed.records.push(rec);
                } else {
                    censored.records.push(rec);
                }
            }
            let (forest, state) = st_rsf_cct(&observed, &censored, &udata, &config)?;
            augmentation = state.augmentation_log;
            forest
        }
    };

    let mut subjects = Vec::with_capacity(test.len());
    for rec in test {
        let pred = forest.predict_with_variance(&rec.features, 0.0)?;
        subjects.push((rec.time, rec.status, pred.mean));
    }
    Ok((c_index(&subjects)?, augmentation))
}

/// Runs the full repeated stratified cross-validation grid for one method.
///
/// Cells are independent and may run concurrently; every random stream is
/// pre-derived from `(plan.seed, repeat, fold, fraction)`, so the result
/// does not depend on scheduling.
pub fn run_experiment(data: &Dataset, plan: &ExperimentPlan) -> Result<CurveResult> {
    if data.records.iter().any(|r| !r.status.is_labeled()) {
        return Err(Error::UnsupportedStatus);
    }
    plan.validate(data)?;

    let folds_per_repeat: Vec<Vec<usize>> = (0..plan.n_repeats)
        .map(|r| {
            assign_folds(data, plan.n_folds, derive_seed(derive_seed(plan.seed, TAG_FOLD), r as u64))
        })
        .collect();

    let grid: Vec<(usize, usize, usize)> = (0..plan.n_repeats)
        .flat_map(|r| {
            (0..plan.n_folds)
                .flat_map(move |f| (0..plan.fractions.len()).map(move |fi| (r, f, fi)))
        })
        .collect();

    let outcomes: Vec<Result<(f64, Vec<(usize, usize)>)>> = grid
        .par_iter()
        .map(|&(r, f, fi)| run_cell(data, plan, &folds_per_repeat[r], r, f, fi))
        .collect();

    let mut cells = Vec::with_capacity(grid.len());
    let mut augmentation = Vec::new();
    for (&(r, f, fi), outcome) in grid.iter().zip(outcomes) {
        let fraction = plan.fractions[fi];
        match outcome {
            Ok((ci, log)) => {
                cells.push(Cell { fraction, repeat: r, fold: f, c_index: Some(ci) });
                if !log.is_empty() {
                    augmentation.push(AugmentationTrace { fraction, repeat: r, fold: f, log });
                }
            }
            Err(e) if is_missing_cell_error(&e) => {
                log::warn!(
                    "skipping cell (repeat {r}, fold {f}, fraction {fraction}): {e}"
                );
                cells.push(Cell { fraction, repeat: r, fold: f, c_index: None });
            }
            Err(e) => return Err(e),
        }
    }

    let summaries = summarize(&cells, &plan.fractions);
    let mut result = CurveResult {
        cells,
        summaries,
        curve_auc: 0.0,
        auc_std: 0.0,
        augmentation,
    };
    result.curve_auc = curve_auc(&result)?;
    result.auc_std = auc_std_over_repeats(&result, plan);
    Ok(result)
}

fn summarize(cells: &[Cell], fractions: &[f64]) -> Vec<FractionSummary> {
    fractions
        .iter()
        .map(|&fraction| {
            let vals: Vec<f64> = cells
                .iter()
                .filter(|c| c.fraction == fraction)
                .filter_map(|c| c.c_index)
                .collect();
            let n = vals.len();
            let mean = if n > 0 { vals.iter().sum::<f64>() / n as f64 } else { f64::NAN };
            let std = if n > 0 {
                (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64).sqrt()
            } else {
                f64::NAN
            };
            FractionSummary { fraction, mean, std, n_cells: n }
        })
        .collect()
}

fn trapezoid_auc(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let range = points.last().unwrap().0 - points.first().unwrap().0;
    let mut area = 0.0;
    for w in points.windows(2) {
        area += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    Some(area / range * 100.0)
}

/// Normalized trapezoidal area under the per-fraction mean C-index curve,
/// on the percentage scale (a constant curve of value c scores 100 c).
pub fn curve_auc(result: &CurveResult) -> Result<f64> {
    let points: Vec<(f64, f64)> = result
        .summaries
        .iter()
        .filter(|s| s.n_cells > 0)
        .map(|s| (s.fraction, s.mean))
        .collect();
    trapezoid_auc(&points).ok_or(Error::CurveTooShort)
}

fn auc_std_over_repeats(result: &CurveResult, plan: &ExperimentPlan) -> f64 {
    let mut aucs = Vec::new();
    for r in 0..plan.n_repeats {
        let points: Vec<(f64, f64)> = plan
            .fractions
            .iter()
            .filter_map(|&fraction| {
                let vals: Vec<f64> = result
                    .cells
                    .iter()
                    .filter(|c| c.repeat == r && c.fraction == fraction)
                    .filter_map(|c| c.c_index)
                    .collect();
                if vals.is_empty() {
                    None
                } else {
                    Some((fraction, vals.iter().sum::<f64>() / vals.len() as f64))
                }
            })
            .collect();
        if let Some(auc) = trapezoid_auc(&points) {
            aucs.push(auc);
        }
    }
    if aucs.len() < 2 {
        return 0.0;
    }
    let mean = aucs.iter().sum::<f64>() / aucs.len() as f64;
    (aucs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / aucs.len() as f64).sqrt()
}

/// Friedman-Nemenyi comparison of methods across datasets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    /// Mean rank per method; rank 1 is the best (highest score).
    pub mean_ranks: Vec<f64>,
    pub friedman_statistic: f64,
    pub critical_difference: f64,
    /// `significant[i][j]` when methods i and j differ by more than the
    /// critical difference.
    pub significant: Vec<Vec<bool>>,
}

// Studentized-range based constants q_alpha / sqrt(2) for the Nemenyi
// critical difference, indexed by the number of methods k = 2..=10.
const Q_ALPHA_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];
const Q_ALPHA_10: [f64; 9] = [1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920];

fn rank_row(row: &[f64]) -> Vec<f64> {
    // rank 1 = highest value; ties share the average rank
    let k = row.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
    let mut ranks = vec![0.0; k];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j < k && row[order[j]] == row[order[i]] {
            j += 1;
        }
        let avg = (i + 1..=j).sum::<usize>() as f64 / (j - i) as f64;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

/// Ranks `scores[dataset][method]` (higher is better), computes the
/// Friedman chi-square statistic and the Nemenyi critical difference, and
/// flags method pairs whose mean ranks differ by more than the CD.
pub fn friedman_nemenyi(scores: &[Vec<f64>], alpha: f64) -> Result<RankingResult> {
    let n = scores.len();
    if n < 2 {
        return Err(Error::InsufficientDatasets);
    }
    let k = scores[0].len();
    if k < 2 || scores.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidConfig("ragged or single-method score matrix".into()));
    }
    let q_table = if (alpha - 0.05).abs() < 1e-9 {
        &Q_ALPHA_05
    } else if (alpha - 0.10).abs() < 1e-9 {
        &Q_ALPHA_10
    } else {
        return Err(Error::InvalidConfig("alpha must be 0.05 or 0.10".into()));
    };
    if k > 10 {
        return Err(Error::InvalidConfig("critical-difference table covers k <= 10".into()));
    }

    let mut mean_ranks = vec![0.0; k];
    for row in scores {
        for (j, r) in rank_row(row).into_iter().enumerate() {
            mean_ranks[j] += r;
        }
    }
    for r in &mut mean_ranks {
        *r /= n as f64;
    }

    let kf = k as f64;
    let nf = n as f64;
    let sum_sq: f64 = mean_ranks.iter().map(|r| r * r).sum();
    let friedman_statistic =
        12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0);

    let critical_difference = q_table[k - 2] * (kf * (kf + 1.0) / (6.0 * nf)).sqrt();

    let significant = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && (mean_ranks[i] - mean_ranks[j]).abs() > critical_difference)
                .collect()
        })
        .collect();

    Ok(RankingResult { mean_ranks, friedman_statistic, critical_difference, significant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use SupervisionStatus::{Censored, Observed};

    #[test]
    fn c_index_perfect_and_inverted() {
        let co: Vec<_> = (1..=5).map(|i| (i as f64, Observed, i as f64 * 2.0)).collect();
        assert_eq!(c_index(&co).unwrap(), 1.0);
        let anti: Vec<_> = (1..=5).map(|i| (i as f64, Observed, -(i as f64))).collect();
        assert_eq!(c_index(&anti).unwrap(), 0.0);
    }

    #[test]
    fn c_index_mixed_censoring_example() {
        // pairs: (1,2) discordant, (1,3) concordant, (2,3) concordant
        let subjects =
            [(1.0, Observed, 5.0), (2.0, Observed, 4.0), (3.0, Censored, 6.0)];
        assert_relative_eq!(c_index(&subjects).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn c_index_edge_cases() {
        assert_eq!(
            c_index(&[(1.0, Censored, 1.0), (2.0, Censored, 2.0)]),
            Err(Error::NoComparablePairs)
        );
        // prediction tie counts one half
        let tied = [(1.0, Observed, 3.0), (2.0, Observed, 3.0)];
        assert_eq!(c_index(&tied).unwrap(), 0.5);
        // tied observed times cannot be ordered
        assert_eq!(
            c_index(&[(2.0, Observed, 1.0), (2.0, Observed, 5.0)]),
            Err(Error::NoComparablePairs)
        );
        // observed vs censored at the same time: the censored subject
        // outlives the event
        assert_eq!(c_index(&[(2.0, Observed, 1.0), (2.0, Censored, 5.0)]).unwrap(), 1.0);
    }

    fn mixed_dataset(n_obs: usize, n_cens: usize) -> Dataset {
        let mut records = Vec::new();
        for i in 0..n_obs {
            records.push(SurvivalRecord::observed(vec![i as f64], (i + 1) as f64));
        }
        for i in 0..n_cens {
            records.push(SurvivalRecord::censored(vec![-(i as f64)], (i + 1) as f64));
        }
        Dataset::new(records, vec!["x".into()]).unwrap()
    }

    #[test]
    fn unlabeled_split_is_stratified() {
        let data = mixed_dataset(40, 60);
        let (ldata, udata) = make_unlabeled_split(&data, 0.5, 9).unwrap();
        assert_eq!(udata.len(), 50);
        assert_eq!(ldata.len(), 50);
        assert_eq!(ldata.count_status(Observed), 20);
        assert_eq!(ldata.count_status(Censored), 30);
        assert!(udata.records.iter().all(|r| r.status == SupervisionStatus::Unlabeled));

        let again = make_unlabeled_split(&data, 0.5, 9).unwrap();
        assert_eq!((ldata, udata), again);
        let other = make_unlabeled_split(&data, 0.5, 10).unwrap();
        assert_ne!(other.0, again.0);
    }

    #[test]
    fn unlabeled_split_rejects_degenerate_output() {
        let data = mixed_dataset(1, 1);
        assert_eq!(make_unlabeled_split(&data, 0.5, 1), Err(Error::DegenerateSplit));
        assert!(make_unlabeled_split(&mixed_dataset(10, 0), 0.0, 1).is_err());
        assert!(make_unlabeled_split(&mixed_dataset(10, 0), 1.0, 1).is_err());
    }

    fn result_with_means(points: &[(f64, f64)]) -> CurveResult {
        CurveResult {
            cells: Vec::new(),
            summaries: points
                .iter()
                .map(|&(fraction, mean)| FractionSummary { fraction, mean, std: 0.0, n_cells: 1 })
                .collect(),
            curve_auc: 0.0,
            auc_std: 0.0,
            augmentation: Vec::new(),
        }
    }

    #[test]
    fn curve_auc_examples() {
        let constant = result_with_means(&[(0.25, 0.7), (0.5, 0.7), (0.75, 0.7)]);
        assert_relative_eq!(curve_auc(&constant).unwrap(), 70.0);

        let linear = result_with_means(&[(0.25, 0.6), (0.75, 0.8)]);
        assert_relative_eq!(curve_auc(&linear).unwrap(), 70.0);

        let three = result_with_means(&[(0.2, 0.5), (0.4, 0.7), (0.6, 0.6)]);
        assert_relative_eq!(curve_auc(&three).unwrap(), 62.5, max_relative = 1e-12);

        let short = result_with_means(&[(0.5, 0.7)]);
        assert_eq!(curve_auc(&short), Err(Error::CurveTooShort));
    }

    #[test]
    fn friedman_all_tied() {
        let scores = vec![vec![1.0; 5]; 3];
        let r = friedman_nemenyi(&scores, 0.05).unwrap();
        assert_eq!(r.mean_ranks, vec![3.0; 5]);
        assert_relative_eq!(r.friedman_statistic, 0.0, epsilon = 1e-12);
        assert!(r.significant.iter().flatten().all(|&s| !s));
    }

    #[test]
    fn nemenyi_cd_for_five_methods_fifteen_datasets() {
        let scores: Vec<Vec<f64>> =
            (0..15).map(|i| (0..5).map(|j| ((i * 7 + j * 3) % 11) as f64).collect()).collect();
        let r = friedman_nemenyi(&scores, 0.05).unwrap();
        assert_relative_eq!(r.critical_difference, 2.728 * (30.0f64 / 90.0).sqrt(), epsilon = 1e-9);
        assert_relative_eq!(r.critical_difference, 1.575, epsilon = 1e-3);
        // mean ranks always sum to k(k+1)/2
        assert_relative_eq!(r.mean_ranks.iter().sum::<f64>(), 15.0, epsilon = 1e-9);
    }

    #[test]
    fn friedman_input_validation() {
        assert_eq!(friedman_nemenyi(&[vec![1.0, 2.0]], 0.05), Err(Error::InsufficientDatasets));
        assert!(friedman_nemenyi(&[vec![1.0, 2.0], vec![2.0, 1.0]], 0.2).is_err());
        assert!(friedman_nemenyi(&[vec![1.0], vec![2.0]], 0.05).is_err());
    }

    #[test]
    fn run_experiment_smoke() {
        let data = mixed_dataset(24, 8);
        let mut plan = ExperimentPlan::new(Method::Rsf);
        plan.fractions = vec![0.5, 0.8];
        plan.n_folds = 2;
        plan.n_repeats = 1;
        plan.forest_config = ForestConfig { n_trees: 10, min_leaf_events: 2, ..Default::default() };
        let result = run_experiment(&data, &plan).unwrap();
        assert_eq!(result.cells.len(), 4);
        for cell in &result.cells {
            let ci = cell.c_index.unwrap();
            assert!((0.0..=1.0).contains(&ci));
        }
        assert!(result.curve_auc.is_finite());
    }

    #[test]
    fn max_reference_is_constant_across_fractions() {
        let data = mixed_dataset(24, 8);
        let mut plan = ExperimentPlan::new(Method::MaxReference);
        plan.fractions = vec![0.3, 0.6, 0.9];
        plan.n_folds = 2;
        plan.n_repeats = 1;
        plan.forest_config = ForestConfig { n_trees: 5, min_leaf_events: 2, ..Default::default() };
        let result = run_experiment(&data, &plan).unwrap();
        for fold in 0..2 {
            let vals: Vec<f64> = result
                .cells
                .iter()
                .filter(|c| c.fold == fold)
                .map(|c| c.c_index.unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
