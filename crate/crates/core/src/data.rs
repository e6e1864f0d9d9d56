use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level of supervision attached to a subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SupervisionStatus {
    /// The event time was recorded exactly.
    Observed,
    /// Right censored: the event time is only known to exceed `time`.
    Censored,
    /// Covariates only; no time or status information.
    Unlabeled,
}

impl SupervisionStatus {
    pub fn is_labeled(self) -> bool {
        !matches!(self, SupervisionStatus::Unlabeled)
    }
}

/// One subject: covariates, study time and supervision status.
///
/// `time` is meaningful only for `Observed` and `Censored` records; unlabeled
/// records carry no usable time information.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalRecord {
    pub features: Vec<f64>,
    pub time: f64,
    pub status: SupervisionStatus,
}

impl SurvivalRecord {
    pub fn observed(features: Vec<f64>, time: f64) -> Self {
        debug_assert!(time >= 0.0);
        Self { features, time, status: SupervisionStatus::Observed }
    }

    pub fn censored(features: Vec<f64>, time: f64) -> Self {
        debug_assert!(time >= 0.0);
        Self { features, time, status: SupervisionStatus::Censored }
    }

    pub fn unlabeled(features: Vec<f64>) -> Self {
        Self { features, time: 0.0, status: SupervisionStatus::Unlabeled }
    }

    pub fn is_event(&self) -> bool {
        self.status == SupervisionStatus::Observed
    }
}

/// An ordered collection of records sharing one feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub records: Vec<SurvivalRecord>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset, checking that every record matches the declared
    /// feature dimensionality and that labeled times are non-negative.
    pub fn new(records: Vec<SurvivalRecord>, feature_names: Vec<String>) -> Result<Self> {
        let p = feature_names.len();
        for r in &records {
            if r.features.len() != p {
                return Err(Error::DimensionMismatch { expected: p, got: r.features.len() });
            }
            if r.status.is_labeled() && !(r.time >= 0.0) {
                return Err(Error::InvalidConfig(format!("negative time {}", r.time)));
            }
        }
        Ok(Self { records, feature_names })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count_status(&self, status: SupervisionStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// Largest observed event time, if any event exists.
    pub fn max_observed_time(&self) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| r.is_event())
            .map(|r| r.time)
            .fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.max(t))))
    }

    /// Same feature space, no records.
    pub fn empty_like(&self) -> Self {
        Self { records: Vec::new(), feature_names: self.feature_names.clone() }
    }
}
