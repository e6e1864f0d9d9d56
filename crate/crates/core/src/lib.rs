//! Survival analysis with three levels of supervision.
//!
//! The crate trains random survival forests on data mixing observed,
//! censored and unlabeled subjects. Three training strategies handle the
//! unlabeled part: zero-time censoring ([`semi_supervised::rsf_plus_ud`]),
//! a self-training wrapper with a prediction-variance stopping rule
//! ([`semi_supervised::st_rsf`]), and a censoring-time-corrected variant
//! ([`semi_supervised::st_rsf_cct`]). The [`evaluation`] module provides
//! the benchmark protocol: repeated stratified cross-validation over
//! labeled-fraction grids scored by concordance index, curve-AUC
//! aggregation, and Friedman-Nemenyi ranking.

pub mod curve;
pub mod data;
pub mod error;
pub mod estimate;
pub mod evaluation;
pub mod forest;
pub mod seed;
pub mod semi_supervised;

pub use curve::StepCurve;
pub use data::{Dataset, SupervisionStatus, SurvivalRecord};
pub use error::{Error, Result};
pub use estimate::{chf_to_survival, expected_future_lifetime, log_rank_statistic, nelson_aalen};
pub use evaluation::{
    c_index, curve_auc, default_fractions, friedman_nemenyi, make_unlabeled_split, run_experiment,
    CurveResult, ExperimentPlan, Method, RankingResult,
};
pub use forest::{EnsemblePrediction, Forest, ForestConfig, SurvivalTree, TreeNode};
pub use semi_supervised::{rsf_plus_ud, st_rsf, st_rsf_cct, SelfTrainState};
