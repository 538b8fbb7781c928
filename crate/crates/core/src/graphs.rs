//! Chung-Lu random graphs with given expected degrees, power-law weight
//! sequences, and largest-eigenvalue checks against `max(sqrt d, d~)`.

use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::SparseHermitian;

/// Expected-degree sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeModel {
    pub weights: Vec<f64>,
    /// Largest weight.
    pub d: f64,
    /// Mean weight.
    pub d_bar: f64,
    /// `sum w^2 / sum w`.
    pub d_tilde: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
}

impl DegreeModel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidModel("no vertices".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidModel(format!("weight {w} is not a non-negative number")));
        }
        let sum: f64 = weights.iter().sum();
        let d = weights.iter().copied().fold(0.0, f64::max);
        let d_bar = sum / weights.len() as f64;
        let d_tilde = if sum > 0.0 {
            weights.iter().map(|w| w * w).sum::<f64>() / sum
        } else {
            0.0
        };
        let slack = 1e-12 * d.max(1.0);
        assert!(d_tilde <= d + slack && d_tilde + slack >= d_bar, "weight averages out of order");
        Ok(Self {
            weights,
            d,
            d_bar,
            d_tilde,
            beta: None,
        })
    }

    pub fn uniform(n: usize, w: f64) -> Result<Self> {
        Self::new(vec![w; n])
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest `w_i w_j / sum w` over pairs `i != j`.
    pub fn max_pair_probability(&self) -> f64 {
        let vol = self.volume();
        if vol == 0.0 || self.n() < 2 {
            return 0.0;
        }
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for &w in &self.weights {
            if w > a {
                b = a;
                a = w;
            } else if w > b {
                b = w;
            }
        }
        a * b / vol
    }

    /// Pairs `i < j` whose probability `w_i w_j / sum w` exceeds 1.
    pub fn clipped_pairs(&self) -> u64 {
        let vol = self.volume();
        let mut w = self.weights.clone();
        w.sort_by(|x, y| y.total_cmp(x));
        // for each i, count j > i with w_i w_j > vol; the prefix shrinks as i grows
        let mut count = 0u64;
        let mut hi = w.len();
        for i in 0..w.len() {
            while hi > 0 && w[i] * w[hi - 1] <= vol {
                hi -= 1;
            }
            if hi > i + 1 {
                count += (hi - i - 1) as u64;
            }
        }
        count
    }

    pub fn validate_strict(&self) -> Result<()> {
        let p = self.max_pair_probability();
        if p > 1.0 {
            return Err(Error::InvalidModel(format!("pair probability {p} exceeds 1")));
        }
        Ok(())
    }
}

/// `w_i = d ((i0) / (i + i0))^{1/(beta - 1)}` for `i = 0..N`, with `i0` chosen
/// so that the mean is `d_bar`.
pub fn power_law_weights(n: usize, beta: f64, d: f64, d_bar: f64) -> Result<DegreeModel> {
    if n == 0 {
        return Err(Error::InfeasibleParameters("no vertices".into()));
    }
    if !(beta > 2.0) {
        return Err(Error::InfeasibleParameters(format!("exponent must exceed 2, got {beta}")));
    }
    if !(d > 0.0 && d_bar > 0.0 && d >= d_bar) {
        return Err(Error::InfeasibleParameters(format!("need d >= d_bar > 0, got d = {d}, d_bar = {d_bar}")));
    }
    let alpha = 1.0 / (beta - 1.0);
    let weights_for = |i0: f64| -> Vec<f64> { (0..n).map(|i| d * (i0 / (i as f64 + i0)).powf(alpha)).collect() };
    let mean_for = |i0: f64| weights_for(i0).iter().sum::<f64>() / n as f64;
    let weights = if (d - d_bar).abs() <= 1e-12 * d {
        vec![d; n]
    } else {
        let (mut lo, mut hi) = (1e-9f64, 1e12f64);
        if mean_for(lo) > d_bar || mean_for(hi) < d_bar {
            return Err(Error::InfeasibleParameters(format!(
                "no offset gives mean {d_bar} with max {d} over {n} vertices"
            )));
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if mean_for(mid) < d_bar {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        weights_for((lo * hi).sqrt())
    };
    let mut model = DegreeModel::new(weights)?;
    model.beta = Some(beta);
    Ok(model)
}

/// Model description accepted on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ModelSpec {
    PowerLaw {
        #[serde(rename = "N")]
        n: usize,
        beta: f64,
        d: f64,
        d_bar: f64,
    },
    Weights {
        weights: Vec<f64>,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<DegreeModel> {
        match self {
            ModelSpec::PowerLaw { n, beta, d, d_bar } => power_law_weights(*n, *beta, *d, *d_bar),
            ModelSpec::Weights { weights } => DegreeModel::new(weights.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledGraph {
    pub adjacency: SparseHermitian,
    /// Pairs whose probability was clipped to 1.
    pub clipped: u64,
}

/// Draws each edge `{i, j}`, `i != j`, independently with probability
/// `min(1, w_i w_j / sum w)`. Uses geometric skipping over weight-sorted
/// vertices so the cost is linear in vertices plus edges. With `strict`,
/// any probability above 1 is an error.
pub fn chung_lu_sample<R: Rng>(model: &DegreeModel, rng: &mut R, strict: bool) -> Result<SampledGraph> {
    if strict {
        model.validate_strict()?;
    }
    let n = model.n();
    let vol = model.volume();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| model.weights[b].total_cmp(&model.weights[a]));
    let w: Vec<f64> = order.iter().map(|&i| model.weights[i]).collect();
    let mut edges = Vec::new();
    if vol > 0.0 {
        for u in 0..n.saturating_sub(1) {
            let mut v = u + 1;
            let mut p = (w[u] * w[v] / vol).min(1.0);
            while v < n && p > 0.0 {
                if p < 1.0 {
                    let r: f64 = rng.random();
                    v = v.saturating_add(((1.0 - r).ln() / (1.0 - p).ln()).floor() as usize);
                }
                if v < n {
                    let q = (w[u] * w[v] / vol).min(1.0);
                    if rng.random::<f64>() < q / p {
                        edges.push((order[u], order[v]));
                    }
                    p = q;
                    v += 1;
                }
            }
        }
    }
    Ok(SampledGraph {
        adjacency: SparseHermitian::from_edges(n, edges)?,
        clipped: model.clipped_pairs(),
    })
}

/// `count` independent graphs; graph `i` uses stream `i` of `seed`.
pub fn sample_graphs(model: &DegreeModel, count: usize, seed: u64) -> Result<Vec<SampledGraph>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            chung_lu_sample(model, &mut rng, false)
        })
        .collect()
}

/// Smallest and largest eigenvalue of a real symmetric sparse matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeEigenvalues {
    pub min: f64,
    pub max: f64,
    pub iterations: usize,
}

impl ExtremeEigenvalues {
    pub fn norm(&self) -> f64 {
        self.min.abs().max(self.max.abs())
    }
}

/// Below this size the extremes come from a dense eigensolver.
pub const DENSE_EXTREMES_MAX: usize = 256;
const LANCZOS_TOL: f64 = 1e-6;
const LANCZOS_MAX_ITER: usize = 400;

/// Extreme eigenvalues, dense for small matrices and Lanczos with full
/// reorthogonalisation otherwise.
pub fn extreme_eigenvalues(a: &SparseHermitian, seed: u64) -> Result<ExtremeEigenvalues> {
    if a.dim() <= DENSE_EXTREMES_MAX {
        let eig = SymmetricEigen::new(a.to_dense_real()?).eigenvalues;
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Ok(ExtremeEigenvalues { min, max, iterations: 0 });
    }
    lanczos_extremes(a, LANCZOS_TOL, LANCZOS_MAX_ITER, seed)
}

/// Ritz values converge once `|beta_m s_{m,i}| <= tol max(1, |theta_i|)`.
pub fn lanczos_extremes(a: &SparseHermitian, tol: f64, max_iter: usize, seed: u64) -> Result<ExtremeEigenvalues> {
    if !a.is_real() {
        return Err(Error::InvalidInput("Lanczos needs a real symmetric matrix".into()));
    }
    let n = a.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; n];
    let cap = max_iter.min(n);
    loop {
        a.mul_real(&q, &mut w);
        let alpha = dot(&w, &q);
        basis.push(q.clone());
        alphas.push(alpha);
        // two passes of classical Gram-Schmidt against every stored vector
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&w, v);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let m = alphas.len();
        let breakdown = beta <= 1e-12 * alphas.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if breakdown || m == cap || m % 5 == 0 {
            let t = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
                0 => alphas[i],
                1 => betas[i.min(j)],
                _ => 0.0,
            });
            let eig = SymmetricEigen::new(t);
            let (imin, imax) = eig.eigenvalues.iter().enumerate().fold((0, 0), |(lo, hi), (i, &x)| {
                (
                    if x < eig.eigenvalues[lo] { i } else { lo },
                    if x > eig.eigenvalues[hi] { i } else { hi },
                )
            });
            let residual = |i: usize| beta * eig.eigenvectors[(m - 1, i)].abs();
            let converged = |i: usize| residual(i) <= tol * eig.eigenvalues[i].abs().max(1.0);
            if breakdown || m == cap || (converged(imin) && converged(imax)) {
                if !breakdown && m == cap && !(converged(imin) && converged(imax)) && cap < n {
                    return Err(Error::EigensolverFailure(format!("Lanczos did not converge in {m} iterations")));
                }
                return Ok(ExtremeEigenvalues {
                    min: eig.eigenvalues[imin],
                    max: eig.eigenvalues[imax],
                    iterations: m,
                });
            }
        }
        betas.push(beta);
        q = w.iter().map(|x| x / beta).collect();
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

/// Which asymptotic prediction the model's parameters support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d~ > sqrt(d) ln N`: largest eigenvalue near `d~`.
    SecondOrderDegree,
    /// `sqrt(d) > d~ ln^2 N`: largest eigenvalue near `sqrt(d)`.
    SqrtMaxDegree,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: usize,
    pub samples: usize,
    pub d: f64,
    pub d_bar: f64,
    pub d_tilde: f64,
    /// `max(sqrt d, d~)`.
    pub predicted: f64,
    pub mean_lambda_max: f64,
    pub std_lambda_max: f64,
    /// `mean_lambda_max / predicted`.
    pub ratio: f64,
    pub regime: Regime,
    /// How far the satisfied precondition holds, as a factor (`< 1` when neither does).
    pub margin: f64,
    pub clipped_pairs: u64,
    pub wallclock_ms: f64,
}

pub fn classify_regime(model: &DegreeModel) -> (Regime, f64) {
    let ln_n = (model.n() as f64).ln();
    let sqrt_d = model.d.sqrt();
    let first = model.d_tilde / (sqrt_d * ln_n);
    let second = sqrt_d / (model.d_tilde * ln_n * ln_n);
    if first > 1.0 {
        (Regime::SecondOrderDegree, first)
    } else if second > 1.0 {
        (Regime::SqrtMaxDegree, second)
    } else {
        (Regime::Neither, first.max(second))
    }
}

/// Samples graphs and compares the mean largest eigenvalue with `max(sqrt d, d~)`.
pub fn eigenvalue_regime_check(model: &DegreeModel, samples: usize, seed: u64) -> Result<RegimeReport> {
    let start = Instant::now();
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample is needed".into()));
    }
    let lambdas = sample_graphs(model, samples, seed)?
        .par_iter()
        .enumerate()
        .map(|(i, g)| extreme_eigenvalues(&g.adjacency, seed ^ i as u64).map(|e| e.max))
        .collect::<Result<Vec<f64>>>()?;
    let mean = lambdas.iter().sum::<f64>() / samples as f64;
    let var = lambdas.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples.max(2) - 1) as f64;
    let predicted = model.d.sqrt().max(model.d_tilde);
    let (regime, margin) = classify_regime(model);
    Ok(RegimeReport {
        n: model.n(),
        samples,
        d: model.d,
        d_bar: model.d_bar,
        d_tilde: model.d_tilde,
        predicted,
        mean_lambda_max: mean,
        std_lambda_max: var.sqrt(),
        ratio: if predicted > 0.0 { mean / predicted } else { f64::NAN },
        regime,
        margin,
        clipped_pairs: model.clipped_pairs(),
        wallclock_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Quantum versus classical accuracy at relative accuracy `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub p: u32,
    pub eps: f64,
    pub norm: f64,
    pub d: usize,
    pub max_entry: f64,
    /// `eps |A|^p`.
    pub quantum_bound: f64,
    /// `eps d^p max|A_ij|^p`.
    pub classical_bound: f64,
    /// `(|A| / (d max|A_ij|))^p`.
    pub ratio: f64,
}

pub fn accuracy_advantage_report(a: &SparseHermitian, p: u32, eps: f64) -> Result<AdvantageReport> {
    let norm = if a.nnz() == 0 { 0.0 } else { extreme_eigenvalues(a, 0)?.norm() };
    let d = a.sparsity();
    let max_entry = a.max_entry();
    let quantum_bound = eps * norm.powi(p as i32);
    let classical_bound = eps * (d as f64 * max_entry).powi(p as i32);
    Ok(AdvantageReport {
        p,
        eps,
        norm,
        d,
        max_entry,
        quantum_bound,
        classical_bound,
        ratio: if classical_bound > 0.0 { quantum_bound / classical_bound } else { f64::NAN },
    })
}

/// Least-squares slope of `log(count)` against `log(degree)` over
/// logarithmic degree bins starting at `min_degree`; bins are normalised by
/// width.
pub fn degree_histogram_slope(graphs: &[SparseHermitian], min_degree: usize) -> Option<f64> {
    let degrees: Vec<usize> = graphs
        .iter()
        .flat_map(|g| (0..g.dim()).map(move |i| g.degree(i)))
        .filter(|&k| k >= min_degree.max(1))
        .collect();
    let max = *degrees.iter().max()?;
    let lo = min_degree.max(1) as f64;
    let bins = ((max as f64 / lo).log2().ceil() as usize).max(1) * 2;
    let edge = |b: usize| lo * 2f64.powf(b as f64 / 2.0);
    let mut counts = vec![0usize; bins + 1];
    for &k in &degrees {
        let b = (2.0 * (k as f64 / lo).log2()).floor() as usize;
        counts[b.min(bins)] += 1;
    }
    let points: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= 5)
        .map(|(b, &c)| {
            let (a, z) = (edge(b), edge(b + 1));
            (((a * z).sqrt()).ln(), (c as f64 / (z - a)).ln())
        })
        .collect();
    if points.len() < 3 {
        return None;
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let cov: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(cov / var)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn zero_weights_give_empty_graph() {
        let model = DegreeModel::uniform(10, 0.0).unwrap();
        let g = chung_lu_sample(&model, &mut rng(0), true).unwrap();
        assert_eq!(g.adjacency.nnz(), 0);
        let adv = accuracy_advantage_report(&g.adjacency, 2, 0.1).unwrap();
        assert_eq!(adv.quantum_bound, 0.0);
    }

    #[test]
    fn two_vertex_edge_frequency() {
        let model = DegreeModel::new(vec![1.0, 1.0]).unwrap();
        let trials = 10_000;
        let mut r = rng(1);
        let hits = (0..trials)
            .filter(|_| chung_lu_sample(&model, &mut r, true).unwrap().adjacency.nnz() == 2)
            .count();
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - 0.5).abs() <= 3.0 * sigma);
    }

    #[test]
    fn two_vertex_lambda_max() {
        let model = DegreeModel::new(vec![1.0, 1.0]).unwrap();
        for g in sample_graphs(&model, 8, 2).unwrap() {
            let lam = extreme_eigenvalues(&g.adjacency, 0).unwrap().max;
            assert!(lam.abs() < 1e-12 || (lam - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_mean_degree() {
        let model = DegreeModel::uniform(256, 8.0).unwrap();
        let graphs = sample_graphs(&model, 20, 3).unwrap();
        let total: usize = graphs.iter().map(|g| g.adjacency.nnz()).sum();
        let mean = total as f64 / (256.0 * 20.0);
        // each degree is Binomial(255, 8/256) up to the excluded self-pair
        let expected = 8.0f64 * 255.0 / 256.0;
        let sigma = (expected * (1.0 - 8.0 / 256.0) / (256.0 * 20.0) * 2.0).sqrt();
        assert!((mean - expected).abs() <= 3.0 * sigma, "{mean}");
    }

    #[test]
    fn samples_are_symmetric_without_loops() {
        let model = power_law_weights(500, 2.5, 40.0, 3.0).unwrap();
        let g = chung_lu_sample(&model, &mut rng(4), false).unwrap().adjacency;
        for i in 0..g.dim() {
            assert_eq!(g.entry(i, i).re, 0.0);
            for &(j, z) in g.row(i) {
                assert_eq!(g.entry(j, i), z);
            }
        }
    }

    #[test]
    fn expected_degrees_follow_weights() {
        let model = power_law_weights(400, 3.0, 20.0, 4.0).unwrap();
        let graphs = sample_graphs(&model, 200, 5).unwrap();
        let vol = model.volume();
        for v in [0, 1, 10, 399] {
            let mean = graphs.iter().map(|g| g.adjacency.degree(v) as f64).sum::<f64>() / 200.0;
            let wv = model.weights[v];
            let expected = wv - wv * wv / vol;
            assert!((mean - expected).abs() <= 4.0 * (expected / 200.0).sqrt() + 1e-9, "{v}: {mean} vs {expected}");
        }
    }

    #[test]
    fn power_law_targets() {
        let m = power_law_weights(1024, 3.0, 30.0, 4.0).unwrap();
        assert!((m.d - 30.0).abs() <= 0.05 * 30.0);
        assert!((m.d_bar - 4.0).abs() <= 0.05 * 4.0);
        assert!(m.d_tilde <= m.d && m.d_tilde >= m.d_bar);
        assert_eq!(m.beta, Some(3.0));
    }

    #[test]
    fn steep_exponent_is_near_uniform() {
        let m = power_law_weights(100, 50.0, 5.0, 5.0).unwrap();
        assert!(m.weights.iter().all(|&w| (w - 5.0).abs() < 1e-12));
    }

    #[test]
    fn infeasible_power_law() {
        assert!(power_law_weights(10, 1.5, 5.0, 2.0).is_err());
        assert!(power_law_weights(10, 3.0, 2.0, 5.0).is_err());
    }

    #[test]
    fn strict_mode_rejects_large_products() {
        let model = DegreeModel::new(vec![10.0, 10.0, 1.0]).unwrap();
        assert!(model.max_pair_probability() > 1.0);
        assert_eq!(model.clipped_pairs(), 1);
        assert!(matches!(chung_lu_sample(&model, &mut rng(0), true), Err(Error::InvalidModel(_))));
        let g = chung_lu_sample(&model, &mut rng(0), false).unwrap();
        assert_eq!(g.clipped, 1);
        assert_eq!(g.adjacency.entry(0, 1).re, 1.0);
    }

    #[test]
    fn lanczos_matches_dense() {
        let model = power_law_weights(300, 2.8, 30.0, 4.0).unwrap();
        let g = chung_lu_sample(&model, &mut rng(6), false).unwrap().adjacency;
        let dense = SymmetricEigen::new(g.to_dense_real().unwrap()).eigenvalues;
        let lz = lanczos_extremes(&g, 1e-10, 300, 1).unwrap();
        assert!((lz.max - dense.max()).abs() <= 1e-6 * dense.max());
        assert!((lz.min - dense.min()).abs() <= 1e-6 * dense.max());
    }

    #[test]
    fn regular_like_graph_has_no_advantage() {
        let model = DegreeModel::uniform(512, 40.0).unwrap();
        let g = chung_lu_sample(&model, &mut rng(7), false).unwrap().adjacency;
        let adv = accuracy_advantage_report(&g, 1, 0.1).unwrap();
        assert!(adv.ratio > 0.6 && adv.ratio <= 1.0, "{}", adv.ratio);
    }

    #[test]
    fn regime_classification() {
        let dense = DegreeModel::uniform(2048, 300.0).unwrap();
        assert_eq!(classify_regime(&dense).0, Regime::SecondOrderDegree);
        let sparse = power_law_weights(2048, 3.0, 64.0, 2.0).unwrap();
        assert_ne!(classify_regime(&sparse).0, Regime::SecondOrderDegree);
    }

    #[test]
    fn model_spec_json() {
        let s: ModelSpec = serde_json::from_str(r#"{"N": 64, "beta": 3.0, "d": 10.0, "d_bar": 3.0}"#).unwrap();
        assert_eq!(s.build().unwrap().n(), 64);
        let w: ModelSpec = serde_json::from_str(r#"{"weights": [1.0, 2.0]}"#).unwrap();
        assert_eq!(w.build().unwrap().d, 2.0);
    }
}
