use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};

/// Error budget of the trace-of-f circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimationBudget {
    pub eps: f64,
    /// Phase-estimation precision (in turns).
    pub eta: f64,
    /// Phase-estimation failure probability.
    pub phi: f64,
    /// Ancilla qubits in the estimate register.
    pub a: usize,
    /// Hamiltonian-simulation accuracy `|V - e^{iA}|`.
    pub delta_sim: f64,
}

/// `ceil(log2(1/eta)) + ceil(log2(2 + 1/(2 phi)))`.
pub fn ancilla_count(eta: f64, phi: f64) -> usize {
    ((1.0 / eta).log2().ceil() + (2.0 + 1.0 / (2.0 * phi)).log2().ceil()) as usize
}

impl PhaseEstimationBudget {
    /// Largest admissible parameters for `eps`: `eta < eps/(8 pi)`,
    /// `phi < eps/8`, `delta_sim = eps/(2 pi)`.
    pub fn from_eps(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidInput(format!("accuracy must lie in (0, 1], got {eps}")));
        }
        let eta = (eps / (8.0 * PI)).next_down();
        let phi = (eps / 8.0).next_down();
        Ok(Self::from_parts(eps, eta, phi, eps / (2.0 * PI)))
    }

    pub fn from_parts(eps: f64, eta: f64, phi: f64, delta_sim: f64) -> Self {
        Self {
            eps,
            eta,
            phi,
            a: ancilla_count(eta, phi),
            delta_sim,
        }
    }

    /// `N = 2^a`.
    pub fn register_size(&self) -> usize {
        1usize << self.a
    }

    pub fn meets_accuracy_rules(&self) -> bool {
        self.eta < self.eps / (8.0 * PI)
            && self.phi < self.eps / 8.0
            && self.delta_sim <= self.eps / (2.0 * PI)
            && self.a >= ancilla_count(self.eta, self.phi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncillaAudit {
    pub n_sys: usize,
    pub a: usize,
    /// `ceil(log2(1/eta)) + ceil(log2(2 + 1/(2 phi)))` for the budget's `eta`, `phi`.
    pub formula: usize,
    /// `ceil(log2(8 pi/eps)) + ceil(log2(2 + 4/eps))`.
    pub eps_bound: usize,
    pub a_max: usize,
    pub pass: bool,
}

/// Counts clean ancillas and checks them against `a_max(n_sys)`.
pub fn audit_budget(budget: &PhaseEstimationBudget, n_sys: usize, config: &Config) -> AncillaAudit {
    let a_max = config.max_ancillas(n_sys);
    let eps_bound =
        ((8.0 * PI / budget.eps).log2().ceil() + (2.0 + 4.0 / budget.eps).log2().ceil()) as usize;
    AncillaAudit {
        n_sys,
        a: budget.a,
        formula: ancilla_count(budget.eta, budget.phi),
        eps_bound,
        a_max,
        pass: budget.a <= a_max,
    }
}
