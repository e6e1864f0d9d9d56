//! Random survival forest: bootstrapped survival trees with log-rank
//! splitting and Nelson-Aalen leaf hazards.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::StepCurve;
use crate::data::{Dataset, SurvivalRecord};
use crate::error::{Error, Result};
use crate::estimate::{chf_to_survival, expected_future_lifetime, nelson_aalen_pairs};
use crate::seed::derive_seed;

/// Forest hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    /// Number of bootstrapped trees (B).
    pub n_trees: usize,
    /// Fraction of features sampled as split candidates at each node;
    /// the candidate count is `ceil(mtry_fraction * p)`.
    pub mtry_fraction: f64,
    /// A node with fewer observed records than this becomes a leaf.
    pub min_leaf_events: usize,
    /// Optional cap on split depth; `Some(0)` yields single-leaf trees.
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 500,
            mtry_fraction: 1.0 / 3.0,
            min_leaf_events: 3,
            max_depth: None,
            seed: 42,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees < 1 {
            return Err(Error::InvalidConfig("n_trees must be >= 1".into()));
        }
        if !(self.mtry_fraction > 0.0 && self.mtry_fraction <= 1.0) {
            return Err(Error::InvalidConfig("mtry_fraction must be in (0, 1]".into()));
        }
        if self.min_leaf_events < 1 {
            return Err(Error::InvalidConfig("min_leaf_events must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Internal { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { chf: StepCurve },
}

/// One bootstrapped survival tree; `nodes[0]` is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalTree {
    pub nodes: Vec<TreeNode>,
}

impl SurvivalTree {
    /// Routes a feature vector to its leaf CHF. Values `<= threshold` go left.
    pub fn leaf_chf(&self, features: &[f64]) -> &StepCurve {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Internal { feature, threshold, left, right } => {
                    idx = if features[*feature] <= *threshold { *left } else { *right };
                }
                TreeNode::Leaf { chf } => return chf,
            }
        }
    }
}

/// Per-tree expected-lifetime samples with their mean and dispersion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePrediction {
    pub per_tree_lifetimes: Vec<f64>,
    pub mean: f64,
    /// Population variance of the per-tree lifetimes (divide by B).
    pub variance: f64,
    pub sigma: f64,
}

/// A fitted random survival forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<SurvivalTree>,
    pub config: ForestConfig,
    /// Largest observed event time in the training data; lifetimes are
    /// integrated up to this point.
    pub training_horizon: f64,
    pub n_features: usize,
}

const MODEL_FORMAT: &str = "ssurv-forest";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    forest: Forest,
}

impl Forest {
    /// Fits `config.n_trees` trees, each on its own bootstrap sample.
    ///
    /// Deterministic in `(train, config)`: each tree's random stream is
    /// derived from `(config.seed, tree index)`, so the result does not
    /// depend on how tree fits are scheduled.
    pub fn fit(train: &Dataset, config: &ForestConfig) -> Result<Forest> {
        config.validate()?;
        if train.records.iter().any(|r| !r.status.is_labeled()) {
            return Err(Error::UnsupportedStatus);
        }
        let horizon = train.max_observed_time().ok_or(Error::NoEventsToFit)?;
        let p = train.n_features();
        let mtry = ((config.mtry_fraction * p as f64).ceil() as usize).clamp(1, p.max(1));

        let trees: Vec<SurvivalTree> = (0..config.n_trees)
            .into_par_iter()
            .map(|i| grow_tree(train, config, mtry, derive_seed(config.seed, i as u64)))
            .collect();

        Ok(Forest { trees, config: config.clone(), training_horizon: horizon, n_features: p })
    }

    fn check_dims(&self, features: &[f64]) -> Result<()> {
        if features.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: features.len(),
            });
        }
        Ok(())
    }

    /// Ensemble CHF: pointwise mean of the leaf CHFs reached in each tree.
    pub fn predict_chf(&self, features: &[f64]) -> Result<StepCurve> {
        self.check_dims(features)?;
        let leaves: Vec<&StepCurve> = self.trees.iter().map(|t| t.leaf_chf(features)).collect();
        StepCurve::mean(&leaves)
    }

    /// Expected future lifetime from the ensemble CHF, truncated at the
    /// training horizon.
    pub fn predict_lifetime(&self, features: &[f64], t0: f64) -> Result<f64> {
        let survival = chf_to_survival(&self.predict_chf(features)?)?;
        expected_future_lifetime(&survival, t0, self.training_horizon)
    }

    /// Per-tree expected lifetimes with mean, population variance and sigma.
    ///
    /// A tree whose leaf survival is already zero at `t0` contributes a
    /// lifetime of 0 instead of aborting the ensemble.
    pub fn predict_with_variance(&self, features: &[f64], t0: f64) -> Result<EnsemblePrediction> {
        self.check_dims(features)?;
        if t0 > self.training_horizon {
            return Err(Error::InvalidHorizon);
        }
        let mut per_tree = Vec::with_capacity(self.trees.len());
        for tree in &self.trees {
            let survival = chf_to_survival(tree.leaf_chf(features))?;
            let tp = match expected_future_lifetime(&survival, t0, self.training_horizon) {
                Ok(v) => v,
                Err(Error::ZeroSurvivalAtT0) => 0.0,
                Err(e) => return Err(e),
            };
            per_tree.push(tp);
        }
        let b = per_tree.len() as f64;
        let mean = per_tree.iter().sum::<f64>() / b;
        let variance = per_tree.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / b;
        Ok(EnsemblePrediction { per_tree_lifetimes: per_tree, mean, variance, sigma: variance.sqrt() })
    }

    /// Version-tagged JSON serialization; round-trips exactly.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            forest: self.clone(),
        })
        .map_err(|e| Error::Model(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Forest> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        if file.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unknown format {:?}", file.format)));
        }
        if file.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported version {}", file.version)));
        }
        Ok(file.forest)
    }
}

// ---------------------------------------------------------------------------
// tree growing

struct TreeBuilder<'a> {
    records: &'a [SurvivalRecord],
    /// Bootstrap sample: indices into `records`.
    boot: Vec<usize>,
    p: usize,
    mtry: usize,
    min_leaf_events: usize,
    max_depth: Option<usize>,
    nodes: Vec<TreeNode>,
}

fn grow_tree(train: &Dataset, config: &ForestConfig, mtry: usize, seed: u64) -> SurvivalTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = train.len();
    let boot: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut builder = TreeBuilder {
        records: &train.records,
        boot,
        p: train.n_features(),
        mtry,
        min_leaf_events: config.min_leaf_events,
        max_depth: config.max_depth,
        nodes: Vec::new(),
    };
    let rows: Vec<usize> = (0..n).collect();
    builder.grow(rows, 0, &mut rng);
    SurvivalTree { nodes: builder.nodes }
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl TreeBuilder<'_> {
    fn record(&self, row: usize) -> &SurvivalRecord {
        &self.records[self.boot[row]]
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let split = if self.stop(&rows, depth) { None } else { self.best_split(&rows, rng) };
        match split {
            None => self.push_leaf(&rows),
            Some(s) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                    .into_iter()
                    .partition(|&r| self.record(r).features[s.feature] <= s.threshold);
                debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());
                let idx = self.nodes.len();
                self.nodes.push(TreeNode::Internal {
                    feature: s.feature,
                    threshold: s.threshold,
                    left: 0,
                    right: 0,
                });
                let left = self.grow(left_rows, depth + 1, rng);
                let right = self.grow(right_rows, depth + 1, rng);
                if let TreeNode::Internal { left: l, right: r, .. } = &mut self.nodes[idx] {
                    *l = left;
                    *r = right;
                }
                idx
            }
        }
    }

    fn stop(&self, rows: &[usize], depth: usize) -> bool {
        if let Some(d) = self.max_depth {
            if depth >= d {
                return true;
            }
        }
        let events = rows.iter().filter(|&&r| self.record(r).is_event()).count();
        events < self.min_leaf_events
    }

    fn push_leaf(&mut self, rows: &[usize]) -> usize {
        let pairs: Vec<(f64, bool)> =
            rows.iter().map(|&r| (self.record(r).time, self.record(r).is_event())).collect();
        // rows is never empty here, so the estimator cannot fail
        let chf = nelson_aalen_pairs(pairs).expect("non-empty leaf");
        let idx = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { chf });
        idx
    }

    /// Scans candidate (feature, threshold) pairs and returns the one with
    /// the highest log-rank score, or `None` when no candidate scores
    /// positive. Ties keep the lowest feature index, then the smallest
    /// threshold, because candidates are scanned in that order with a
    /// strict improvement test.
    fn best_split(&self, rows: &[usize], rng: &mut ChaCha8Rng) -> Option<SplitChoice> {
        // distinct event times within the node
        let mut event_times: Vec<f64> =
            rows.iter().filter(|&&r| self.record(r).is_event()).map(|&r| self.record(r).time).collect();
        event_times.sort_by(f64::total_cmp);
        event_times.dedup();
        let m = event_times.len();
        if m == 0 {
            return None;
        }

        // per row: how many event times it is at risk for (a prefix of the
        // sorted list), and the index of its own event time if any
        let n_rows = rows.len();
        let mut risk_prefix = vec![0usize; n_rows];
        let mut event_idx = vec![usize::MAX; n_rows];
        let mut d_tot = vec![0.0f64; m];
        let mut risk_hist = vec![0usize; m + 1];
        for (i, &r) in rows.iter().enumerate() {
            let rec = self.record(r);
            let k = event_times.partition_point(|&t| t <= rec.time);
            risk_prefix[i] = k;
            risk_hist[k] += 1;
            if rec.is_event() {
                let j = event_times.partition_point(|&t| t < rec.time);
                event_idx[i] = j;
                d_tot[j] += 1.0;
            }
        }
        // n_tot[j] = number of rows at risk at event_times[j]
        let mut n_tot = vec![0.0f64; m];
        let mut acc = 0usize;
        for j in (0..m).rev() {
            acc += risk_hist[j + 1];
            n_tot[j] = acc as f64;
        }

        let mut candidate_features = rand::seq::index::sample(rng, self.p, self.mtry).into_vec();
        candidate_features.sort_unstable();

        let total_events: usize = d_tot.iter().map(|&d| d as usize).sum();

        let mut best: Option<SplitChoice> = None;
        let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(n_rows);
        let mut left_hist = vec![0usize; m + 1];
        let mut d_left = vec![0.0f64; m];

        for &feature in &candidate_features {
            sorted.clear();
            sorted.extend(rows.iter().enumerate().map(|(i, &r)| (self.record(r).features[feature], i)));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

            left_hist.iter_mut().for_each(|v| *v = 0);
            d_left.iter_mut().for_each(|v| *v = 0.0);

            let mut i = 0;
            let mut events_left = 0usize;
            while i < n_rows {
                let value = sorted[i].0;
                // move the whole group of equal values into the left child
                while i < n_rows && sorted[i].0 == value {
                    let local = sorted[i].1;
                    left_hist[risk_prefix[local]] += 1;
                    if event_idx[local] != usize::MAX {
                        d_left[event_idx[local]] += 1.0;
                        events_left += 1;
                    }
                    i += 1;
                }
                if i == n_rows {
                    break; // no right child after the last distinct value
                }
                // a split is admissible only when each child keeps at least
                // 2 * min_leaf_events observed events, so terminal nodes
                // stay comfortably above the stop threshold and their
                // hazard estimates keep usable risk-set tails
                let child_min = 2 * self.min_leaf_events;
                if events_left < child_min || total_events - events_left < child_min {
                    continue;
                }
                let threshold = 0.5 * (value + sorted[i].0);
                let score = self.log_rank_sweep(&left_hist, &d_left, &n_tot, &d_tot, m);
                if score > 0.0 && best.as_ref().is_none_or(|b| score > b.score) {
                    best = Some(SplitChoice { feature, threshold, score });
                }
            }
        }
        best
    }

    fn log_rank_sweep(
        &self,
        left_hist: &[usize],
        d_left: &[f64],
        n_tot: &[f64],
        d_tot: &[f64],
        m: usize,
    ) -> f64 {
        let mut num = 0.0;
        let mut var = 0.0;
        let mut n_left = 0usize;
        for j in (0..m).rev() {
            n_left += left_hist[j + 1];
            let n = n_tot[j];
            let d = d_tot[j];
            let frac = n_left as f64 / n;
            num += d_left[j] - d * frac;
            if n > 1.0 {
                var += d * frac * (1.0 - frac) * (n - d) / (n - 1.0);
            }
        }
        if var > 0.0 {
            num.abs() / var.sqrt()
        } else {
            0.0
        }
    }
}
