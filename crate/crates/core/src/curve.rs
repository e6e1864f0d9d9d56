use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-continuous piecewise-constant function of time.
///
/// The curve equals `initial_value` on `[0, knots[0])` and `values[i]` on
/// `[knots[i], knots[i+1])`; past the last knot it stays at the last value.
/// Both cumulative hazard functions and survival curves use this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCurve {
    pub initial_value: f64,
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepCurve {
    pub fn new(initial_value: f64, knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::InvalidCurve(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        for w in knots.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidCurve(format!(
                    "knots not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&first) = knots.first() {
            if !(first >= 0.0) {
                return Err(Error::InvalidCurve(format!("negative knot {first}")));
            }
        }
        Ok(Self { initial_value, knots, values })
    }

    /// The constant curve with no knots.
    pub fn constant(value: f64) -> Self {
        Self { initial_value: value, knots: Vec::new(), values: Vec::new() }
    }

    /// Right-continuous evaluation: the value attached to the largest knot
    /// `<= t`, or `initial_value` before the first knot.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.knots.partition_point(|&k| k <= t);
        if idx == 0 {
            self.initial_value
        } else {
            self.values[idx - 1]
        }
    }

    pub fn is_chf(&self) -> bool {
        if self.initial_value != 0.0 {
            return false;
        }
        let mut prev = 0.0;
        for &v in &self.values {
            if !(v >= prev) {
                return false;
            }
            prev = v;
        }
        true
    }

    pub fn is_survival(&self) -> bool {
        if self.initial_value != 1.0 {
            return false;
        }
        let mut prev = 1.0;
        for &v in &self.values {
            if !(v <= prev && v >= 0.0) {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Exact integral over `[a, b]` as a sum of rectangle areas.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        let mut left = a;
        // index of the first knot strictly greater than `a`
        let mut idx = self.knots.partition_point(|&k| k <= a);
        while idx < self.knots.len() && self.knots[idx] < b {
            let right = self.knots[idx];
            total += self.value_at(left) * (right - left);
            left = right;
            idx += 1;
        }
        total += self.value_at(left) * (b - left);
        total
    }

    /// Pointwise arithmetic mean of several curves; the knot set of the
    /// result is the union of the inputs' knot sets.
    pub fn mean(curves: &[&StepCurve]) -> Result<StepCurve> {
        if curves.is_empty() {
            return Err(Error::InvalidCurve("mean of zero curves".into()));
        }
        let mut knots: Vec<f64> = curves.iter().flat_map(|c| c.knots.iter().copied()).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let n = curves.len() as f64;
        let initial_value = curves.iter().map(|c| c.initial_value).sum::<f64>() / n;
        let values = knots
            .iter()
            .map(|&t| curves.iter().map(|c| c.value_at(t)).sum::<f64>() / n)
            .collect();
        StepCurve::new(initial_value, knots, values)
    }
}
