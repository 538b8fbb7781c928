//! Ground truth by full eigendecomposition, plus the exact term-expansion
//! algorithm for `Tr(A^p)` of a log-local Hamiltonian.

mod function;

pub use function::{FunctionKind, SpectralFunction};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::{embed, LogLocalHamiltonian, SparseHermitian};
use crate::linalg::{self, hermiticity_residual, max_abs, CMatrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub norm: f64,
    /// Smallest `|lambda_j|`.
    pub min_abs_eig: f64,
    /// `|A| / lambda_min`, or `+inf` when `lambda_min = 0`.
    pub condition: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let norm = eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let min_abs_eig = eigenvalues.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        let min_abs_eig = if eigenvalues.is_empty() { 0.0 } else { min_abs_eig };
        let condition = if min_abs_eig > 0.0 {
            norm / min_abs_eig
        } else {
            f64::INFINITY
        };
        Self {
            eigenvalues,
            norm,
            min_abs_eig,
            condition,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_j f(lambda_j) / dim`.
    pub fn trace_f(&self, f: &SpectralFunction) -> Result<f64> {
        let tol = 1e-9 * f.half_width().max(1.0);
        if let Some(&bad) = self.eigenvalues.iter().find(|&&l| !f.contains(l, tol)) {
            return Err(Error::SpectrumOutsideInterval {
                eigenvalue: bad,
                lo: f.lo,
                hi: f.hi,
            });
        }
        Ok(self.mean_of(|l| f.eval(l)))
    }

    pub fn schatten_p_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidInput(format!("Schatten norms need p >= 1, got {p}")));
        }
        Ok(self.mean_of(|l| l.abs().powf(p)).powf(1.0 / p))
    }

    /// `sum_j |lambda_j|^p / dim`.
    pub fn abs_power_mean(&self, p: f64) -> f64 {
        self.mean_of(|l| l.abs().powf(p))
    }

    /// `sum_j lambda_j^p / dim`.
    pub fn power_mean(&self, p: u32) -> f64 {
        self.mean_of(|l| l.powi(p as i32))
    }

    fn mean_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        self.eigenvalues.iter().map(|&l| f(l)).sum::<f64>() / self.eigenvalues.len() as f64
    }
}

/// Eigendecomposition with a reconstruction check.
pub fn spectrum(a: &CMatrix) -> Result<SpectrumReport> {
    spectrum_with(a, &Config::default())
}

pub fn spectrum_with(a: &CMatrix, config: &Config) -> Result<SpectrumReport> {
    let dim = a.nrows();
    if !a.is_square() {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    let qubits = dim.next_power_of_two().trailing_zeros() as usize;
    config.check_dense(qubits)?;
    let residual = hermiticity_residual(a);
    if residual > config.tol_herm * max_abs(a).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let (values, vectors) = linalg::hermitian_eigh(a)?;
    let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        values.iter().map(|&v| C64::new(v, 0.0)),
    ));
    let recon = max_abs(&(&vectors * lambda * vectors.adjoint() - a));
    if recon > config.eig_reconstruction_tol * max_abs(a).max(1.0) {
        return Err(Error::EigensolverFailure(format!(
            "reconstruction residual {recon:e} exceeds tolerance"
        )));
    }
    Ok(SpectrumReport::from_eigenvalues(values))
}

/// Spectrum of a real symmetric sparse matrix (dense path).
pub fn sparse_spectrum(a: &SparseHermitian, config: &Config) -> Result<SpectrumReport> {
    if a.dim() > config.dense_eig_max_vertices {
        return Err(Error::DimensionTooLarge {
            qubits: a.dim().next_power_of_two().trailing_zeros() as usize,
            max: config.dense_eig_max_vertices.next_power_of_two().trailing_zeros() as usize,
        });
    }
    if a.dim() == 0 {
        return Ok(SpectrumReport::from_eigenvalues(Vec::new()));
    }
    let values = match a.to_dense_real() {
        Ok(m) => m.symmetric_eigenvalues().iter().copied().collect(),
        Err(_) => linalg::hermitian_eigenvalues(&a.to_dense())?,
    };
    Ok(SpectrumReport::from_eigenvalues(values))
}

/// `Tr(f(A)) / dim`.
pub fn trace_f(a: &CMatrix, f: &SpectralFunction) -> Result<f64> {
    spectrum(a)?.trace_f(f)
}

pub fn schatten_p_norm(a: &CMatrix, p: f64) -> Result<f64> {
    spectrum(a)?.schatten_p_norm(p)
}

/// Normalised graph energy `Tr|A| / N` of a real symmetric matrix.
pub fn graph_energy(a: &SparseHermitian) -> Result<f64> {
    graph_energy_with(a, &Config::default())
}

pub fn graph_energy_with(a: &SparseHermitian, config: &Config) -> Result<f64> {
    if !a.is_real() {
        return Err(Error::NotRealSymmetric);
    }
    Ok(sparse_spectrum(a, config)?.abs_power_mean(1.0))
}

/// Exact `Tr(A^p) / 2^n` by expanding `A^p` into all `m^p` products of local
/// terms, each multiplied on the union of its supports.
pub fn trace_power_exact_local(h: &LogLocalHamiltonian, p: u32) -> Result<f64> {
    trace_power_exact_local_with(h, p, &Config::default())
}

pub fn trace_power_exact_local_with(h: &LogLocalHamiltonian, p: u32, config: &Config) -> Result<f64> {
    let m = h.num_terms() as u128;
    let work = m.checked_pow(p).unwrap_or(u128::MAX);
    if work > config.exact_power_budget {
        return Err(Error::WorkBudgetExceeded {
            work,
            budget: config.exact_power_budget,
        });
    }
    if p == 0 {
        return Ok(1.0);
    }
    let partial: Vec<C64> = (0..h.num_terms())
        .into_par_iter()
        .map(|j| {
            let term = &h.terms()[j];
            let mut support = term.qubits().to_vec();
            support.sort_unstable();
            let product = term.embed_into(&support);
            expand(h, p - 1, &support, &product)
        })
        .collect();
    let total: C64 = partial.into_iter().sum();
    Ok(total.re)
}

/// Sum over all continuations of `product` by `depth` more terms of
/// `Tr(product) / 2^{|support|}` (the normalised trace on the full register).
fn expand(h: &LogLocalHamiltonian, depth: u32, support: &[usize], product: &CMatrix) -> C64 {
    if depth == 0 {
        return linalg::trace(product) / (1u64 << support.len()) as f64;
    }
    h.terms()
        .iter()
        .map(|term| {
            let mut grown: Vec<usize> = support.iter().chain(term.qubits()).copied().collect();
            grown.sort_unstable();
            grown.dedup();
            let lifted = if grown.len() == support.len() {
                product.clone()
            } else {
                embed(support, product, &grown)
            };
            let next = lifted * term.embed_into(&grown);
            expand(h, depth - 1, &grown, &next)
        })
        .sum()
}

/// Relative-error bracket for recovering `|A|_p` from an estimate of
/// `Tr|A|^p / 2^n` carrying additive error `eps |A|^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PthRootBracket {
    /// `trace_est^{1/p}`.
    pub norm_estimate: f64,
    /// `(1 + eps)^{1/p}`.
    pub best_factor: f64,
    /// `(1 + eps kappa^p)^{1/p}`.
    pub worst_factor: f64,
    /// `((1 + delta)^p - 1) / kappa^p` for the requested `delta`.
    pub eps_prime: Option<f64>,
}

pub fn pth_root_error_report(
    trace_est: f64,
    eps: f64,
    p: f64,
    spec: &SpectrumReport,
    target_delta: Option<f64>,
) -> Result<PthRootBracket> {
    if !(trace_est > 0.0) {
        return Err(Error::InvalidInput(format!("trace estimate must be positive, got {trace_est}")));
    }
    if !(p >= 1.0) || !(eps >= 0.0) {
        return Err(Error::InvalidInput("need p >= 1 and eps >= 0".into()));
    }
    if !spec.condition.is_finite() {
        return Err(Error::ConditionInfinite);
    }
    let kappa_p = spec.condition.powf(p);
    Ok(PthRootBracket {
        norm_estimate: trace_est.powf(1.0 / p),
        best_factor: (1.0 + eps).powf(1.0 / p),
        worst_factor: (1.0 + eps * kappa_p).powf(1.0 / p),
        eps_prime: target_delta.map(|d| ((1.0 + d).powf(p) - 1.0) / kappa_p),
    })
}
