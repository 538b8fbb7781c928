use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Exact,
    Dqc1,
    Walker,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Exact => "exact",
            Estimator::Dqc1 => "dqc1",
            Estimator::Walker => "walker",
        })
    }
}

/// Phase-estimation and simulation parameters behind a quantum estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub eps: f64,
    pub eta: f64,
    pub phi: f64,
    pub a: usize,
    pub delta: f64,
    /// Trotter steps; `None` when `e^{iA}` is applied exactly.
    pub r: Option<u64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
}

/// Sample sizes behind a random-walk estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub p: u32,
    pub k: u64,
    pub k_prime: u64,
    pub vertices: u64,
    pub eps: f64,
    pub eps_prime: f64,
    pub fail_prob: f64,
    pub mode: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub estimator: Estimator,
    /// Readout or sampling mode, e.g. `exact_submatrix`, `sampled`, `corrected`.
    pub mode: String,
    pub value: f64,
    pub claimed_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<BudgetRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub walk: Option<WalkRecord>,
    pub wallclock_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pass: Option<bool>,
}

impl EstimateReport {
    pub fn new(estimator: Estimator, mode: impl Into<String>, value: f64, claimed_bound: f64) -> Self {
        Self {
            estimator,
            mode: mode.into(),
            value,
            claimed_bound,
            shots: None,
            seed: None,
            budget: None,
            walk: None,
            wallclock_ms: 0.0,
            truth: None,
            pass: None,
        }
    }

    /// Attaches ground truth; `pass` becomes `|value - truth| <= claimed_bound`.
    pub fn with_truth(mut self, truth: f64) -> Self {
        self.truth = Some(truth);
        self.pass = Some(self.error().is_some_and(|e| e <= self.claimed_bound));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_elapsed(mut self, since: Instant) -> Self {
        self.wallclock_ms = since.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn error(&self) -> Option<f64> {
        self.truth.map(|t| (self.value - t).abs())
    }

    /// Multiplies value, bound and truth by `s >= 0`.
    pub fn rescaled(mut self, s: f64) -> Self {
        self.value *= s;
        self.claimed_bound *= s.abs();
        if let Some(t) = self.truth {
            self = self.with_truth(t * s);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_within_bound() {
        let r = EstimateReport::new(Estimator::Dqc1, "exact_submatrix", 1.05, 0.1);
        assert_eq!(r.pass, None);
        assert_eq!(r.clone().with_truth(1.0).pass, Some(true));
        assert_eq!(r.with_truth(0.9).pass, Some(false));
    }

    #[test]
    fn json_keys() {
        let mut r = EstimateReport::new(Estimator::Dqc1, "sampled", 0.5, 0.01).with_seed(3);
        r.budget = Some(BudgetRecord {
            eps: 0.1,
            eta: 0.003,
            phi: 0.012,
            a: 15,
            delta: 0.016,
            r: Some(10),
            c: Some(1.0),
        });
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["value", "claimed_bound", "mode", "seed", "budget", "wallclock_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["budget"].get("C").is_some());
        let back: EstimateReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
