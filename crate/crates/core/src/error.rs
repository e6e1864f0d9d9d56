use thiserror::Error;

/// Errors produced by estimators, forests and the evaluation protocol.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty risk set")]
    EmptyRiskSet,
    #[error("unsupported status: unlabeled records cannot be used here")]
    UnsupportedStatus,
    #[error("not a CHF")]
    NotAChf,
    #[error("zero survival at t0")]
    ZeroSurvivalAtT0,
    #[error("invalid horizon")]
    InvalidHorizon,
    #[error("empty child")]
    EmptyChild,
    #[error("no events to fit")]
    NoEventsToFit,
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no comparable pairs")]
    NoComparablePairs,
    #[error("degenerate split")]
    DegenerateSplit,
    #[error("curve too short")]
    CurveTooShort,
    #[error("insufficient datasets")]
    InsufficientDatasets,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("model (de)serialization failed: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
