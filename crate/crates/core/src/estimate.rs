//! Nonparametric estimators: Nelson-Aalen cumulative hazard, hazard to
//! survival conversion, expected future lifetime, and the two-sample
//! log-rank statistic used for split scoring.

use crate::curve::StepCurve;
use crate::data::SurvivalRecord;
use crate::error::{Error, Result};

fn check_labeled(records: &[SurvivalRecord]) -> Result<()> {
    if records.iter().any(|r| !r.status.is_labeled()) {
        return Err(Error::UnsupportedStatus);
    }
    Ok(())
}

/// Nelson-Aalen estimate of the cumulative hazard function.
///
/// H(t) = sum over event times t_i <= t of d_i / n_i, where d_i is the
/// number of events at exactly t_i and n_i the number of records still at
/// risk (time >= t_i). Censored records at a tied time remain in the risk
/// set for events at that time.
pub fn nelson_aalen(records: &[SurvivalRecord]) -> Result<StepCurve> {
    check_labeled(records)?;
    nelson_aalen_pairs(records.iter().map(|r| (r.time, r.is_event())).collect())
}

/// Same estimator over bare `(time, is_event)` pairs; lets the forest fit
/// leaves without materializing record clones.
pub(crate) fn nelson_aalen_pairs(mut times: Vec<(f64, bool)>) -> Result<StepCurve> {
    if times.is_empty() {
        return Err(Error::EmptyRiskSet);
    }
    times.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = times.len();
    let mut knots = Vec::new();
    let mut values = Vec::new();
    let mut cum = 0.0;
    let mut i = 0;
    while i < n {
        let t = times[i].0;
        let mut j = i;
        let mut events = 0usize;
        while j < n && times[j].0 == t {
            events += usize::from(times[j].1);
            j += 1;
        }
        if events > 0 {
            let at_risk = (n - i) as f64;
            cum += events as f64 / at_risk;
            knots.push(t);
            values.push(cum);
        }
        i = j;
    }
    StepCurve::new(0.0, knots, values)
}

/// Converts a cumulative hazard function into the survival curve
/// S(t) = exp(-H(t)).
pub fn chf_to_survival(chf: &StepCurve) -> Result<StepCurve> {
    if !chf.is_chf() {
        return Err(Error::NotAChf);
    }
    StepCurve::new(1.0, chf.knots.clone(), chf.values.iter().map(|&v| (-v).exp()).collect())
}

/// Expected future lifetime at `t0`: the mean remaining time until the
/// event given survival to `t0`, with the integral truncated at `horizon`.
///
/// The survival curve is piecewise constant, so the integral is an exact
/// rectangle sum.
pub fn expected_future_lifetime(survival: &StepCurve, t0: f64, horizon: f64) -> Result<f64> {
    if horizon < t0 {
        return Err(Error::InvalidHorizon);
    }
    let s0 = survival.value_at(t0);
    if s0 <= 0.0 {
        return Err(Error::ZeroSurvivalAtT0);
    }
    Ok(survival.integrate(t0, horizon) / s0)
}

/// Two-sample log-rank statistic in absolute standardized form.
///
/// Sweeps the distinct event times of the pooled sample; returns
/// |sum(O - E)| / sqrt(sum V). A zero total variance means the split is
/// uninformative and scores 0.
pub fn log_rank_statistic(left: &[SurvivalRecord], right: &[SurvivalRecord]) -> Result<f64> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::EmptyChild);
    }
    check_labeled(left)?;
    check_labeled(right)?;

    let mut event_times: Vec<f64> = left
        .iter()
        .chain(right.iter())
        .filter(|r| r.is_event())
        .map(|r| r.time)
        .collect();
    event_times.sort_by(f64::total_cmp);
    event_times.dedup();

    let mut sum_o_minus_e = 0.0;
    let mut sum_v = 0.0;
    for &t in &event_times {
        let n_left = left.iter().filter(|r| r.time >= t).count() as f64;
        let n_right = right.iter().filter(|r| r.time >= t).count() as f64;
        let n = n_left + n_right;
        let d_left = left.iter().filter(|r| r.is_event() && r.time == t).count() as f64;
        let d_right = right.iter().filter(|r| r.is_event() && r.time == t).count() as f64;
        let d = d_left + d_right;
        let frac = n_left / n;
        sum_o_minus_e += d_left - d * frac;
        if n > 1.0 {
            sum_v += d * frac * (1.0 - frac) * (n - d) / (n - 1.0);
        }
    }
    if sum_v <= 0.0 {
        return Ok(0.0);
    }
    Ok(sum_o_minus_e.abs() / sum_v.sqrt())
}
