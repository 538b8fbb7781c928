//! Random-walk estimation of `(A^p)_{jj}` and `Tr(A^p)/N` for sparse real
//! symmetric matrices.
//!
//! `X` counts realisable candidate walks (neighbour ranks drawn uniformly from
//! `0..d`), `Y` averages the weight of closed walks, and the product `X Y`
//! estimates the diagonal entry.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{MatrixClass, SparseHermitian};
use crate::report::{EstimateReport, Estimator, WalkRecord};

/// How return walks are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    /// Each step picks a uniformly random actual neighbour.
    Literal,
    /// Walks are drawn uniformly from the realisable candidate walks by
    /// rejection, so that `E[X Y] = (A^p)_{jj}` on irregular graphs.
    #[default]
    Corrected,
    /// Every candidate and every realisable walk is enumerated.
    Exhaustive,
}

impl WalkMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WalkMode::Literal => "literal",
            WalkMode::Corrected => "corrected",
            WalkMode::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for WalkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(WalkMode::Literal),
            "corrected" => Ok(WalkMode::Corrected),
            "exhaustive" => Ok(WalkMode::Exhaustive),
            other => Err(Error::InvalidInput(format!("unknown walk mode `{other}`"))),
        }
    }
}

/// Hoeffding sample sizes for the two stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSizes {
    pub k: u64,
    pub k_prime: u64,
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// `k = ceil(ln(2/f) / (2 eps^2))`; `k'` likewise, except `ln(2/f) / eps'^2`
/// for signed entries.
pub fn plan_samples(eps: f64, eps_prime: f64, fail_prob: f64, class: MatrixClass) -> Result<SampleSizes> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("eps_prime", eps_prime)?;
    check_unit_interval("fail_prob", fail_prob)?;
    let log = (2.0 / fail_prob).ln();
    let k = (log / (2.0 * eps * eps)).ceil() as u64;
    let k_prime = match class {
        MatrixClass::SignedUnit => (log / (eps_prime * eps_prime)).ceil() as u64,
        MatrixClass::ZeroOne | MatrixClass::WeightedReal => (log / (2.0 * eps_prime * eps_prime)).ceil() as u64,
    };
    Ok(SampleSizes { k, k_prime })
}

/// `k'' = ceil(2 ln(2/f) / delta^2)` sampled vertices.
pub fn vertex_samples(delta: f64, fail_prob: f64) -> Result<u64> {
    check_unit_interval("fail_prob", fail_prob)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    Ok((2.0 * (2.0 / fail_prob).ln() / (delta * delta)).ceil() as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkPlan {
    pub p: u32,
    pub k: u64,
    pub k_prime: u64,
    pub eps: f64,
    pub eps_prime: f64,
    pub fail_prob: f64,
    pub d: usize,
    pub class: MatrixClass,
    pub mode: WalkMode,
}

impl WalkPlan {
    pub fn new(a: &SparseHermitian, p: u32, eps: f64, eps_prime: f64, fail_prob: f64) -> Result<Self> {
        let class = walk_class(a)?;
        let SampleSizes { k, k_prime } = plan_samples(eps, eps_prime, fail_prob, class)?;
        Ok(Self {
            p,
            k,
            k_prime,
            eps,
            eps_prime,
            fail_prob,
            d: a.sparsity(),
            class,
            mode: WalkMode::default(),
        })
    }

    pub fn with_mode(mut self, mode: WalkMode) -> Self {
        self.mode = mode;
        self
    }

    /// `eps + eps' + eps eps'`.
    pub fn delta(&self) -> f64 {
        self.eps + self.eps_prime + self.eps * self.eps_prime
    }

    /// `d^p max|A_ij|^p`.
    pub fn scale(&self, a: &SparseHermitian) -> f64 {
        let max = match self.class {
            MatrixClass::WeightedReal => a.max_entry(),
            MatrixClass::ZeroOne | MatrixClass::SignedUnit => 1.0,
        };
        (self.d as f64 * max).powi(self.p as i32)
    }

    pub fn bound(&self, a: &SparseHermitian) -> f64 {
        self.delta() * self.scale(a)
    }

    fn record(&self, vertices: u64) -> WalkRecord {
        WalkRecord {
            p: self.p,
            k: self.k,
            k_prime: self.k_prime,
            vertices,
            eps: self.eps,
            eps_prime: self.eps_prime,
            fail_prob: self.fail_prob,
            mode: self.mode.to_string(),
        }
    }
}

fn walk_class(a: &SparseHermitian) -> Result<MatrixClass> {
    a.class()
        .ok_or_else(|| Error::InvalidInput("random-walk estimation needs a real symmetric matrix".into()))
}

/// Follows neighbour ranks from `j`; `None` when a rank exceeds the degree.
fn follow(a: &SparseHermitian, j: usize, ranks: impl IntoIterator<Item = usize>) -> Option<(usize, f64)> {
    ranks.into_iter().try_fold((j, 1.0), |(v, w), r| {
        a.row(v).get(r).map(|&(u, z)| (u, w * z.re))
    })
}

fn closed_weight((end, w): (usize, f64), j: usize) -> f64 {
    if end == j {
        w
    } else {
        0.0
    }
}

/// `X = (d^p / k) * #{realisable candidates}`.
pub fn count_walks_estimate<R: Rng>(a: &SparseHermitian, j: usize, p: u32, k: u64, rng: &mut R) -> f64 {
    let d = a.sparsity();
    if p == 0 {
        return 1.0;
    }
    if d == 0 || k == 0 {
        return 0.0;
    }
    let hits = (0..k)
        .filter(|_| follow(a, j, (0..p).map(|_| rng.random_range(0..d))).is_some())
        .count();
    (d as f64).powi(p as i32) * hits as f64 / k as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnEstimate {
    pub value: f64,
    /// Walks that contributed (accepted candidates in corrected mode).
    pub samples: u64,
    /// `j` has no neighbours and `p >= 1`.
    pub isolated: bool,
}

/// Rejection attempts allowed per requested return walk.
const REJECTION_CAP_FACTOR: u64 = 100_000;

/// Mean weight of closed walks among `k'` walks of length `p` from `j`.
pub fn return_weight_estimate<R: Rng>(
    a: &SparseHermitian,
    j: usize,
    p: u32,
    k_prime: u64,
    mode: WalkMode,
    rng: &mut R,
) -> Result<ReturnEstimate> {
    if p == 0 {
        return Ok(ReturnEstimate {
            value: 1.0,
            samples: k_prime,
            isolated: false,
        });
    }
    if a.degree(j) == 0 {
        return Ok(ReturnEstimate {
            value: 0.0,
            samples: 0,
            isolated: true,
        });
    }
    if k_prime == 0 {
        return Err(Error::InvalidInput("k' must be positive".into()));
    }
    let d = a.sparsity();
    let total: f64 = match mode {
        WalkMode::Literal => (0..k_prime)
            .map(|_| {
                let end = (0..p).try_fold((j, 1.0), |(v, w), _| {
                    let row = a.row(v);
                    let (u, z) = row[rng.random_range(0..row.len())];
                    Some((u, w * z.re))
                });
                closed_weight(end.expect("walk from a non-isolated vertex"), j)
            })
            .sum(),
        WalkMode::Corrected => {
            let cap = k_prime.saturating_mul(REJECTION_CAP_FACTOR);
            let mut accepted = 0;
            let mut attempts = 0u64;
            let mut sum = 0.0;
            while accepted < k_prime {
                if attempts == cap {
                    return Err(Error::WorkBudgetExceeded {
                        work: attempts as u128,
                        budget: cap as u128,
                    });
                }
                attempts += 1;
                if let Some(end) = follow(a, j, (0..p).map(|_| rng.random_range(0..d))) {
                    accepted += 1;
                    sum += closed_weight(end, j);
                }
            }
            sum
        }
        WalkMode::Exhaustive => {
            let (count, closed) = enumerate_walks(a, j, p);
            return Ok(ReturnEstimate {
                value: closed / count as f64,
                samples: count,
                isolated: false,
            });
        }
    };
    Ok(ReturnEstimate {
        value: total / k_prime as f64,
        samples: k_prime,
        isolated: false,
    })
}

/// Number of length-`p` walks from `j` and the summed weight of closed ones.
pub fn enumerate_walks(a: &SparseHermitian, j: usize, p: u32) -> (u64, f64) {
    fn go(a: &SparseHermitian, j: usize, v: usize, w: f64, left: u32, acc: &mut (u64, f64)) {
        if left == 0 {
            acc.0 += 1;
            acc.1 += closed_weight((v, w), j);
            return;
        }
        for &(u, z) in a.row(v) {
            go(a, j, u, w * z.re, left - 1, acc);
        }
    }
    let mut acc = (0, 0.0);
    go(a, j, j, 1.0, p, &mut acc);
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalEstimate {
    pub j: usize,
    pub value: f64,
    /// `delta d^p max|A_ij|^p`.
    pub bound: f64,
    pub walks: f64,
    pub return_weight: f64,
    pub isolated: bool,
    pub plan: WalkPlan,
    pub seed: Option<u64>,
}

/// `X * Y` for vertex `j` under `plan`.
pub fn diagonal_estimate<R: Rng>(a: &SparseHermitian, j: usize, plan: &WalkPlan, rng: &mut R) -> Result<DiagonalEstimate> {
    if j >= a.dim() {
        return Err(Error::InvalidInput(format!("vertex {j} outside 0..{}", a.dim())));
    }
    let p = plan.p;
    let walks = match plan.mode {
        WalkMode::Exhaustive => enumerate_walks(a, j, p).0 as f64,
        WalkMode::Literal | WalkMode::Corrected => count_walks_estimate(a, j, p, plan.k, rng),
    };
    let ret = if walks == 0.0 {
        ReturnEstimate {
            value: 0.0,
            samples: 0,
            isolated: a.degree(j) == 0,
        }
    } else {
        return_weight_estimate(a, j, p, plan.k_prime, plan.mode, rng)?
    };
    Ok(DiagonalEstimate {
        j,
        value: walks * ret.value,
        bound: plan.bound(a),
        walks,
        return_weight: ret.value,
        isolated: ret.isolated,
        plan: plan.clone(),
        seed: None,
    })
}

/// Generator for vertex-estimate `i` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, c) = xs.into_iter().fold((0.0f64, 0.0f64), |(s, c), x| {
        let t = s + x;
        let c = if s.abs() >= x.abs() { c + ((s - t) + x) } else { c + ((x - t) + s) };
        (t, c)
    });
    sum + c
}

/// Mean of `k''` diagonal estimates at uniformly random vertices, estimating
/// `Tr(A^p) / N`. Exhaustive mode visits every vertex instead.
pub fn trace_power_estimate(a: &SparseHermitian, plan: &WalkPlan, vertices: u64, seed: u64) -> Result<EstimateReport> {
    let start = Instant::now();
    if a.dim() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let picks: Vec<usize> = match plan.mode {
        WalkMode::Exhaustive => (0..a.dim()).collect(),
        WalkMode::Literal | WalkMode::Corrected => {
            if vertices == 0 {
                return Err(Error::InvalidInput("at least one vertex sample is needed".into()));
            }
            let mut master = stream_rng(seed, u64::MAX);
            (0..vertices).map(|_| master.random_range(0..a.dim())).collect()
        }
    };
    let values = picks
        .par_iter()
        .enumerate()
        .map(|(i, &j)| diagonal_estimate(a, j, plan, &mut stream_rng(seed, i as u64)).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    let mean = neumaier_sum(values) / picks.len() as f64;
    let bound = match plan.mode {
        WalkMode::Exhaustive => 0.0,
        WalkMode::Literal | WalkMode::Corrected => plan.bound(a),
    };
    let mut report = EstimateReport::new(Estimator::Walker, plan.mode.as_str(), mean, bound).with_seed(seed);
    report.walk = Some(plan.record(picks.len() as u64));
    Ok(report.with_elapsed(start))
}

/// Plans and runs [`trace_power_estimate`] with `k''` from `delta = eps + eps' + eps eps'`.
pub fn estimate_trace_power(
    a: &SparseHermitian,
    p: u32,
    eps: f64,
    eps_prime: f64,
    fail_prob: f64,
    mode: WalkMode,
    seed: u64,
) -> Result<EstimateReport> {
    let plan = WalkPlan::new(a, p, eps, eps_prime, fail_prob)?.with_mode(mode);
    let vertices = vertex_samples(plan.delta(), fail_prob)?;
    trace_power_estimate(a, &plan, vertices, seed)
}
