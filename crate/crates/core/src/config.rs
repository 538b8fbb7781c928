//! Run-time limits and calibrated constants shared by every estimator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trotter constant chosen by the calibration suite (start at 1, double until
/// every certification fixture passes). The suite re-derives it on each run.
pub const CALIBRATED_TROTTER_CONSTANT: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest register (in qubits) that may be materialised as a dense matrix.
    pub n_dense_max: usize,
    /// Max-norm tolerance for Hermiticity checks.
    pub tol_herm: f64,
    /// Locality constant `c` in `k_max = max(ceil(c * log2 n), k_floor)`.
    pub locality_factor: f64,
    pub locality_floor: usize,
    /// Gap kept between `|A|` and `pi` so that `x -> e^{ix}` is injective on the spectrum.
    pub spectrum_margin: f64,
    pub trotter_constant: f64,
    /// Ancilla ceiling `a_max(n) = ceil(anc_log_factor * log2(n + 2)) + anc_offset`.
    pub anc_log_factor: f64,
    pub anc_offset: usize,
    pub eps_min: f64,
    /// Maximum number of term products `m^p` for the exact local expansion.
    pub exact_power_budget: u128,
    /// Largest graph handled by the dense eigensolver; bigger graphs use Lanczos.
    pub dense_eig_max_vertices: usize,
    pub eig_reconstruction_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n_dense_max: 12,
            tol_herm: 1e-12,
            locality_factor: 2.0,
            locality_floor: 2,
            spectrum_margin: 0.1,
            trotter_constant: CALIBRATED_TROTTER_CONSTANT,
            anc_log_factor: 2.0,
            anc_offset: 16,
            eps_min: 0.01,
            exact_power_budget: 1_000_000,
            dense_eig_max_vertices: 4096,
            eig_reconstruction_tol: 1e-9,
        }
    }
}

impl Config {
    pub fn max_locality(&self, n: usize) -> usize {
        let scaled = (self.locality_factor * (n.max(1) as f64).log2()).ceil() as usize;
        scaled.max(self.locality_floor)
    }

    pub fn max_ancillas(&self, n_sys: usize) -> usize {
        (self.anc_log_factor * ((n_sys + 2) as f64).log2()).ceil() as usize + self.anc_offset
    }

    /// Largest admissible `|A|` for phase estimation of `e^{iA}`.
    pub fn phase_limit(&self) -> f64 {
        std::f64::consts::PI - self.spectrum_margin
    }

    /// Rejects `|A|` above the phase limit (with rounding slack).
    pub fn check_phase_range(&self, norm: f64) -> Result<()> {
        let limit = self.phase_limit();
        if norm > limit * (1.0 + 1e-12) {
            return Err(Error::SpectrumOutOfRange { norm, limit });
        }
        Ok(())
    }

    pub fn check_dense(&self, qubits: usize) -> Result<()> {
        if qubits > self.n_dense_max {
            return Err(Error::DimensionTooLarge {
                qubits,
                max: self.n_dense_max,
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_dense_max == 0 || self.n_dense_max > 24 {
            return Err(Error::Config(format!(
                "n_dense_max must lie in 1..=24, got {}",
                self.n_dense_max
            )));
        }
        if !(self.tol_herm >= 0.0) || !(self.spectrum_margin > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.trotter_constant > 0.0) {
            return Err(Error::Config("trotter_constant must be positive".into()));
        }
        if !(self.eps_min > 0.0 && self.eps_min < 1.0) {
            return Err(Error::Config("eps_min must lie in (0, 1)".into()));
        }
        Ok(())
    }
}
