use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::budget::PhaseEstimationBudget;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_dense_with, LogLocalHamiltonian};
use crate::linalg::{self, c64, hadamard, identity, kron, CMatrix, C64};
use crate::oracle::SpectralFunction;
use crate::trotter::{plan_trotter_with, trotter_unitary_with, TrotterPlan};

/// How `e^{iA}` is realised inside phase estimation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Simulation {
    #[default]
    Trotter,
    /// `V = e^{iA}` exactly; isolates the phase-estimation error.
    Exact,
}

/// The trace-of-f circuit on `[rotation qubit, n system qubits, a ancillas]`.
///
/// Applying it to `|psi_j>|b>|0>` and projecting the ancillas back on `|0>`
/// gives `sum_k |gamma_{k|j}|^2 e^{+-i arccos f(phi(k))}`, with `+` for `b = 0`.
#[derive(Clone, Debug)]
pub struct DQC1Program {
    pub n_sys: usize,
    pub n_anc: usize,
    pub budget: PhaseEstimationBudget,
    pub trotter: Option<TrotterPlan>,
    pub function: SpectralFunction,
    v: CMatrix,
    /// Eigenphases `mu_j` of `V` in `(-pi, pi]`, paired with the columns of `vectors`.
    phases: Vec<f64>,
    vectors: CMatrix,
}

/// Piecewise phase map: `2 pi x / N` for `x <= N/2`, else `2 pi x / N - 2 pi`.
/// The tie `x = N/2` maps to `+pi`.
pub fn phase_map(x: usize, a: usize) -> f64 {
    let n = 1usize << a;
    let base = 2.0 * PI * x as f64 / n as f64;
    if x <= n / 2 {
        base
    } else {
        base - 2.0 * PI
    }
}

/// Estimate-register amplitudes `gamma_k = (1/N) sum_x e^{2 pi i x (theta - k/N)}`
/// left by phase estimation on an eigenvector with eigenphase `theta` (turns).
pub fn pe_amplitudes(theta: f64, a: usize, planner: &mut FftPlanner<f64>) -> Vec<C64> {
    let n = 1usize << a;
    let norm = 1.0 / n as f64;
    let mut buf: Vec<C64> = (0..n)
        .map(|x| C64::from_polar(norm, 2.0 * PI * (theta * x as f64).fract()))
        .collect();
    planner.plan_fft_forward(n).process(&mut buf);
    buf
}

/// `theta = mu / 2 pi` reduced to `[0, 1)`.
fn turns(mu: f64) -> f64 {
    (mu / (2.0 * PI)).rem_euclid(1.0)
}

pub fn build_trace_f_circuit(
    h: &LogLocalHamiltonian,
    f: &SpectralFunction,
    budget: &PhaseEstimationBudget,
) -> Result<DQC1Program> {
    build_trace_f_circuit_with(h, f, budget, Simulation::Trotter, &Config::default())
}

pub fn build_trace_f_circuit_with(
    h: &LogLocalHamiltonian,
    f: &SpectralFunction,
    budget: &PhaseEstimationBudget,
    simulation: Simulation,
    config: &Config,
) -> Result<DQC1Program> {
    let a_max = config.max_ancillas(h.n());
    if budget.a > a_max {
        return Err(Error::BudgetInfeasible(format!(
            "{} ancillas requested, the ceiling for n = {} is {a_max}",
            budget.a,
            h.n()
        )));
    }
    if budget.a == 0 || budget.a > 30 {
        return Err(Error::BudgetInfeasible(format!("ancilla count {} is out of range", budget.a)));
    }
    if f.f_max > 1.0 + 1e-12 {
        return Err(Error::FunctionOutOfRange { f_max: f.f_max });
    }
    let a_dense = assemble_dense_with(h, config)?;
    let (lambda, eigvecs) = linalg::hermitian_eigh(&a_dense)?;
    let norm = lambda.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    config.check_phase_range(norm)?;

    let (trotter, v, phases, vectors) = match simulation {
        Simulation::Trotter => {
            let plan = plan_trotter_with(h, 1.0, budget.delta_sim.min(1.0), config.trotter_constant)?;
            let v = trotter_unitary_with(h, &plan, config)?;
            let (phases, vectors) = linalg::unitary_eigh(&v)?;
            (Some(plan), v, phases, vectors)
        }
        Simulation::Exact => {
            let v = linalg::exp_i_hermitian(&a_dense, 1.0)?;
            (None, v, lambda, eigvecs)
        }
    };
    Ok(DQC1Program {
        n_sys: h.n(),
        n_anc: budget.a,
        budget: budget.clone(),
        trotter,
        function: f.clone(),
        v,
        phases,
        vectors,
    })
}

impl DQC1Program {
    /// The simulated `e^{iA}`.
    pub fn simulated_unitary(&self) -> &CMatrix {
        &self.v
    }

    pub fn eigenphases(&self) -> &[f64] {
        &self.phases
    }

    /// `arccos f(phi(k))` for every register value `k`, with `phi(k)` clamped
    /// into the function's interval.
    pub fn rotation_angles(&self) -> Vec<f64> {
        (0..1usize << self.n_anc)
            .map(|k| {
                let fk = self.function.eval_clamped(phase_map(k, self.n_anc));
                fk.clamp(-1.0, 1.0).acos()
            })
            .collect()
    }

    /// `<psi_j, b, 0| U |psi_j, b, 0>` for `b = 0, 1`, per eigenvector of `V`.
    pub fn diagonal_amplitudes(&self) -> Vec<[C64; 2]> {
        let angles = self.rotation_angles();
        let rot: Vec<C64> = angles.iter().map(|&g| C64::from_polar(1.0, g)).collect();
        self.phases
            .par_iter()
            .map_init(FftPlanner::new, |planner, &mu| {
                let gamma = pe_amplitudes(turns(mu), self.n_anc, planner);
                let mut plus = c64(0.0, 0.0);
                let mut minus = c64(0.0, 0.0);
                for (g, r) in gamma.iter().zip(&rot) {
                    let w = g.norm_sqr();
                    plus += r * w;
                    minus += r.conj() * w;
                }
                [plus, minus]
            })
            .collect()
    }

    /// `Tr(U')`, the trace with every ancilla fixed to `|0>`.
    pub fn compressed_trace(&self) -> C64 {
        self.diagonal_amplitudes().iter().map(|[p, m]| p + m).sum()
    }

    /// `U'` on `[rotation qubit, system]`, i.e. `<0|_anc U |0>_anc`.
    pub fn compressed_matrix(&self) -> CMatrix {
        let amps = self.diagonal_amplitudes();
        let dim = 1usize << self.n_sys;
        let mut out = CMatrix::zeros(2 * dim, 2 * dim);
        for b in 0..2 {
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                dim,
                amps.iter().map(|pair| pair[b]),
            ));
            let block = &self.vectors * d * self.vectors.adjoint();
            out.view_mut((b * dim, b * dim), (dim, dim)).copy_from(&block);
        }
        out
    }

    /// DQC1 zero-outcome probability per mixed input `|b, x>` with clean ancillas.
    pub fn zero_probabilities(&self) -> Vec<f64> {
        let u = self.compressed_matrix();
        (0..u.nrows()).map(|i| 0.5 + 0.5 * u[(i, i)].re).collect()
    }

    /// The full circuit unitary `PE^dag D PE` on `1 + n + a` qubits, built
    /// gate by gate: Hadamards, controlled powers of `V`, inverse QFT, then the
    /// controlled rotation diagonal.
    pub fn dense_unitary(&self, config: &Config) -> Result<CMatrix> {
        let qubits = 1 + self.n_sys + self.n_anc;
        config.check_dense(qubits)?;
        let n_reg = 1usize << self.n_anc;
        let sys = 1usize << self.n_sys;

        let mut h_a = identity(1);
        for _ in 0..self.n_anc {
            h_a = kron(&h_a, &hadamard());
        }
        let mut controlled = CMatrix::zeros(sys * n_reg, sys * n_reg);
        let mut power = identity(sys);
        for x in 0..n_reg {
            for r in 0..sys {
                for c in 0..sys {
                    controlled[(r * n_reg + x, c * n_reg + x)] = power[(r, c)];
                }
            }
            power = &self.v * power;
        }
        let scale = 1.0 / (n_reg as f64).sqrt();
        let iqft = CMatrix::from_fn(n_reg, n_reg, |k, x| {
            C64::from_polar(scale, -2.0 * PI * ((k * x) % n_reg) as f64 / n_reg as f64)
        });
        let pe = kron(&identity(sys), &iqft) * controlled * kron(&identity(sys), &h_a);
        let pe = kron(&identity(2), &pe);

        let angles = self.rotation_angles();
        let diag = nalgebra::DVector::from_fn(2 * sys * n_reg, |i, _| {
            let b = i / (sys * n_reg);
            let k = i % n_reg;
            let sign = if b == 0 { 1.0 } else { -1.0 };
            C64::from_polar(1.0, sign * angles[k])
        });
        let d = CMatrix::from_diagonal(&diag);
        Ok(pe.adjoint() * d * pe)
    }
}
