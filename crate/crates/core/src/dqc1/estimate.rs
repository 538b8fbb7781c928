use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::baseline::sampled_readout;
use super::budget::PhaseEstimationBudget;
use super::circuit::{build_trace_f_circuit_with, DQC1Program, Simulation};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_dense_with, LogLocalHamiltonian};
use crate::oracle::{spectrum_with, SpectralFunction};
use crate::report::{BudgetRecord, EstimateReport, Estimator};

/// Readout of `Tr(U')`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TraceFMode {
    /// Sum `<j, b, 0|U|j, b, 0>` exactly.
    ExactSubmatrix,
    /// Bernoulli shots on the clean qubit; the readout error is at most
    /// `eps/4` on `Tr f(A)/2^n` with probability `1 - fail_prob`.
    Sampled { fail_prob: f64 },
}

impl TraceFMode {
    pub fn name(&self) -> &'static str {
        match self {
            TraceFMode::ExactSubmatrix => "exact_submatrix",
            TraceFMode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFOptions {
    pub mode: TraceFMode,
    pub simulation: Simulation,
    pub seed: u64,
    pub config: Config,
}

impl Default for TraceFOptions {
    fn default() -> Self {
        Self {
            mode: TraceFMode::ExactSubmatrix,
            simulation: Simulation::Trotter,
            seed: 0,
            config: Config::default(),
        }
    }
}

impl TraceFOptions {
    pub fn sampled(fail_prob: f64, seed: u64) -> Self {
        Self {
            mode: TraceFMode::Sampled { fail_prob },
            seed,
            ..Self::default()
        }
    }
}

/// Shots giving readout error `eps/4` on the halved trace: `ceil(32 ln(2/f) / eps^2)`.
pub fn readout_shots(eps: f64, fail_prob: f64) -> u64 {
    (32.0 * (2.0 / fail_prob).ln() / (eps * eps)).ceil() as u64
}

/// A built circuit plus its deterministic readout, reusable across seeds.
#[derive(Clone, Debug)]
pub struct PreparedTraceF {
    pub program: DQC1Program,
    /// `Re Tr(U') / 2^{n+1}`, the exact-submatrix estimate of `Tr f(A)/2^n`.
    pub exact_value: f64,
    /// `Im Tr(U') / 2^{n+1}`.
    pub imag_residual: f64,
    zero_probs: Option<Vec<f64>>,
}

impl PreparedTraceF {
    pub fn new(
        h: &LogLocalHamiltonian,
        f: &SpectralFunction,
        eps: f64,
        simulation: Simulation,
        config: &Config,
    ) -> Result<Self> {
        let budget = PhaseEstimationBudget::from_eps(eps)?;
        let program = build_trace_f_circuit_with(h, f, &budget, simulation, config)?;
        let norm = (2usize << h.n()) as f64;
        let tr = program.compressed_trace();
        Ok(Self {
            program,
            exact_value: tr.re / norm,
            imag_residual: tr.im / norm,
            zero_probs: None,
        })
    }

    /// `eps (K + 1) / 2`.
    pub fn claimed_bound(&self) -> f64 {
        self.program.budget.eps * (self.program.function.lipschitz + 1.0) / 2.0
    }

    fn base_report(&self, mode: &str) -> EstimateReport {
        let mut r = EstimateReport::new(Estimator::Dqc1, mode, self.exact_value, self.claimed_bound());
        let b = &self.program.budget;
        r.budget = Some(BudgetRecord {
            eps: b.eps,
            eta: b.eta,
            phi: b.phi,
            a: b.a,
            delta: b.delta_sim,
            r: self.program.trotter.as_ref().map(|p| p.steps),
            c: self.program.trotter.as_ref().map(|p| p.constant),
        });
        r
    }

    pub fn exact_report(&self) -> EstimateReport {
        self.base_report(TraceFMode::ExactSubmatrix.name())
    }

    pub fn sampled_report(&mut self, fail_prob: f64, seed: u64) -> Result<EstimateReport> {
        if !(fail_prob > 0.0 && fail_prob < 1.0) {
            return Err(Error::InvalidInput(format!("failure probability must lie in (0, 1), got {fail_prob}")));
        }
        let shots = readout_shots(self.program.budget.eps, fail_prob);
        let probs = self
            .zero_probs
            .get_or_insert_with(|| self.program.zero_probabilities());
        let value = sampled_readout(probs, shots, seed)?;
        let mut r = self.base_report(TraceFMode::Sampled { fail_prob }.name());
        r.value = value;
        r.shots = Some(shots);
        r.seed = Some(seed);
        Ok(r)
    }

    pub fn report(&mut self, mode: TraceFMode, seed: u64) -> Result<EstimateReport> {
        match mode {
            TraceFMode::ExactSubmatrix => Ok(self.exact_report().with_seed(seed)),
            TraceFMode::Sampled { fail_prob } => self.sampled_report(fail_prob, seed),
        }
    }
}

/// Estimate of `Tr f(A) / 2^n` with claimed bound `eps (K + 1) / 2`.
pub fn run_trace_f(
    h: &LogLocalHamiltonian,
    f: &SpectralFunction,
    eps: f64,
    options: &TraceFOptions,
) -> Result<EstimateReport> {
    if eps < options.config.eps_min {
        return Err(Error::InvalidInput(format!(
            "accuracy {eps} is below the configured minimum {}",
            options.config.eps_min
        )));
    }
    run_trace_f_unchecked(h, f, eps, options)
}

fn run_trace_f_unchecked(
    h: &LogLocalHamiltonian,
    f: &SpectralFunction,
    eps: f64,
    options: &TraceFOptions,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let mut prepared = PreparedTraceF::new(h, f, eps, options.simulation, &options.config)?;
    Ok(prepared.report(options.mode, options.seed)?.with_elapsed(start))
}

/// Which power is traced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerKind {
    /// `Tr|A|^p / 2^n`.
    Abs,
    /// `Tr A^p / 2^n`.
    Signed,
}

/// Rescaling applied before the circuit runs.
#[derive(Clone, Debug, PartialEq)]
pub struct SchattenPlan {
    /// `|A|`.
    pub norm: f64,
    /// Factor taking `A` to spectral radius `pi - margin`.
    pub scale: f64,
    pub function: SpectralFunction,
    pub inner_eps: f64,
    pub hamiltonian: LogLocalHamiltonian,
}

/// Rescales `A` to `|A| = pi - margin` and picks `f = x^p / |A|^p` (or
/// `|x|^p`) with inner accuracy `eps / (p/|A| + 1)`. `None` when `A = 0`.
pub fn plan_schatten(
    h: &LogLocalHamiltonian,
    p: u32,
    eps: f64,
    kind: PowerKind,
    config: &Config,
) -> Result<Option<SchattenPlan>> {
    if p == 0 {
        return Err(Error::InvalidInput("p must be at least 1".into()));
    }
    if eps < config.eps_min {
        return Err(Error::InvalidInput(format!(
            "accuracy {eps} is below the configured minimum {}",
            config.eps_min
        )));
    }
    let norm = spectrum_with(&assemble_dense_with(h, config)?, config)?.norm;
    if norm == 0.0 {
        return Ok(None);
    }
    let b = config.phase_limit();
    let scale = b / norm;
    let function = match kind {
        PowerKind::Abs => SpectralFunction::abs_pow(f64::from(p), b)?,
        PowerKind::Signed => SpectralFunction::pow(p, b),
    }
    .scaled(b.powi(-(p as i32)));
    let inner_eps = eps / (f64::from(p) / b + 1.0);
    Ok(Some(SchattenPlan {
        norm,
        scale,
        function,
        inner_eps,
        hamiltonian: h.scaled(scale),
    }))
}

/// A planned and built Schatten-trace circuit, reusable across seeds.
#[derive(Clone, Debug)]
pub struct PreparedSchatten {
    pub p: u32,
    pub eps: f64,
    /// `None` when `A = 0`.
    pub plan: Option<SchattenPlan>,
    prepared: Option<PreparedTraceF>,
}

impl PreparedSchatten {
    pub fn new(
        h: &LogLocalHamiltonian,
        p: u32,
        eps: f64,
        kind: PowerKind,
        simulation: Simulation,
        config: &Config,
    ) -> Result<Self> {
        let plan = plan_schatten(h, p, eps, kind, config)?;
        let prepared = plan
            .as_ref()
            .map(|plan| PreparedTraceF::new(&plan.hamiltonian, &plan.function, plan.inner_eps, simulation, config))
            .transpose()?;
        Ok(Self { p, eps, plan, prepared })
    }

    pub fn report(&mut self, mode: TraceFMode, seed: u64) -> Result<EstimateReport> {
        let start = Instant::now();
        let (Some(plan), Some(prepared)) = (&self.plan, &mut self.prepared) else {
            return Ok(EstimateReport::new(Estimator::Dqc1, mode.name(), 0.0, 0.0)
                .with_seed(seed)
                .with_elapsed(start));
        };
        let mut report = prepared.report(mode, seed)?.rescaled(plan.norm.powi(self.p as i32));
        if let Some(budget) = report.budget.as_mut() {
            budget.eps = self.eps;
        }
        Ok(report.with_elapsed(start))
    }
}

/// Estimate of `Tr|A|^p / 2^n` (or `Tr A^p / 2^n`) with claimed bound
/// `eps |A|^p / 2`.
pub fn estimate_schatten_trace(
    h: &LogLocalHamiltonian,
    p: u32,
    eps: f64,
    kind: PowerKind,
    options: &TraceFOptions,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let mut prepared = PreparedSchatten::new(h, p, eps, kind, options.simulation, &options.config)?;
    Ok(prepared.report(options.mode, options.seed)?.with_elapsed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{assemble_dense, random_local_hamiltonian, LocalTerm};
    use crate::linalg::{pauli_x, pauli_z, CMatrix};
    use crate::oracle::{spectrum, trace_f};
    use std::f64::consts::PI;

    fn single(m: CMatrix) -> LogLocalHamiltonian {
        LogLocalHamiltonian::new(1, vec![LocalTerm::new(vec![0], m).unwrap()]).unwrap()
    }

    #[test]
    fn shots_formula() {
        assert_eq!(readout_shots(0.1, 0.05), (3200.0 * 40f64.ln()).ceil() as u64);
    }

    #[test]
    fn z_abs_power_within_bound() {
        let h = single(pauli_z());
        let f = SpectralFunction::abs_pow(3.0, PI).unwrap().scaled(PI.powi(-3));
        let r = run_trace_f(&h, &f, 0.1, &TraceFOptions::default()).unwrap();
        let truth = trace_f(&pauli_z(), &f).unwrap();
        assert!((truth - PI.powi(-3)).abs() < 1e-15);
        assert!((r.value - truth).abs() <= r.claimed_bound);
    }

    #[test]
    fn zero_hamiltonian_constant_function() {
        let h = single(CMatrix::zeros(2, 2));
        let f = SpectralFunction::constant(0.37, PI);
        let r = run_trace_f(&h, &f, 0.1, &TraceFOptions::default()).unwrap();
        assert!((r.value - 0.37).abs() <= r.claimed_bound);
        assert!((r.value - 0.37).abs() < 1e-9);
    }

    #[test]
    fn random_fixture_all_eps() {
        let h = random_local_hamiltonian(4, 3, 2, 21);
        let h = h.scaled(3.0 / h.norm_bound());
        let f = SpectralFunction::pow(2, PI).scaled(1.0 / (PI * PI));
        let truth = trace_f(&assemble_dense(&h).unwrap(), &f).unwrap();
        for eps in [0.2, 0.1, 0.05] {
            let r = run_trace_f(&h, &f, eps, &TraceFOptions::default()).unwrap().with_truth(truth);
            assert_eq!(r.pass, Some(true), "eps {eps}: {} vs {truth}", r.value);
        }
    }

    #[test]
    fn imaginary_part_cancels() {
        let h = random_local_hamiltonian(3, 2, 2, 5);
        let h = h.scaled(2.0 / h.norm_bound());
        let f = SpectralFunction::abs_pow(1.0, PI).unwrap().scaled(1.0 / PI);
        let prep = PreparedTraceF::new(&h, &f, 0.2, Simulation::Trotter, &Config::default()).unwrap();
        assert!(prep.imag_residual.abs() < 1e-9);
    }

    #[test]
    fn sampled_mode_reproducible() {
        let h = single(pauli_z().map(|z| z * 0.7));
        let f = SpectralFunction::pow(2, PI).scaled(1.0 / (PI * PI));
        let opts = TraceFOptions::sampled(0.05, 11);
        let a = run_trace_f(&h, &f, 0.2, &opts).unwrap();
        let b = run_trace_f(&h, &f, 0.2, &opts).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.shots, Some(readout_shots(0.2, 0.05)));
        let truth = 0.49 / (PI * PI);
        assert!((a.value - truth).abs() <= a.claimed_bound);
    }

    #[test]
    fn schatten_half_z_squared() {
        let h = single(pauli_z().map(|z| z * 0.5));
        let eps = 0.1;
        let r = estimate_schatten_trace(&h, 2, eps, PowerKind::Abs, &TraceFOptions::default()).unwrap();
        assert!((r.value - 0.25).abs() <= eps * 0.25, "{}", r.value);
    }

    #[test]
    fn schatten_single_edge_energy() {
        let h = single(pauli_x());
        let r = estimate_schatten_trace(&h, 1, 0.1, PowerKind::Abs, &TraceFOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() <= 0.1);
    }

    #[test]
    fn odd_power_vs_abs_power() {
        let h = random_local_hamiltonian(4, 3, 2, 77);
        let a = assemble_dense(&h).unwrap();
        let s = spectrum(&a).unwrap();
        let signed_truth = s.power_mean(3);
        let abs_truth = s.abs_power_mean(3.0);
        assert!((signed_truth - abs_truth).abs() > 0.1);
        let eps = 0.1;
        let bound = eps * s.norm.powi(3);
        let opts = TraceFOptions::default();
        let signed = estimate_schatten_trace(&h, 3, eps, PowerKind::Signed, &opts).unwrap();
        let abs = estimate_schatten_trace(&h, 3, eps, PowerKind::Abs, &opts).unwrap();
        assert!((signed.value - signed_truth).abs() <= bound);
        assert!((abs.value - abs_truth).abs() <= bound);
        assert!((signed.value - abs.value).abs() > 2.0 * bound);
    }

    #[test]
    fn zero_matrix_gives_zero() {
        let h = single(CMatrix::zeros(2, 2));
        let r = estimate_schatten_trace(&h, 2, 0.1, PowerKind::Abs, &TraceFOptions::default()).unwrap();
        assert_eq!((r.value, r.claimed_bound), (0.0, 0.0));
    }

    #[test]
    fn eps_below_minimum_rejected() {
        let h = single(pauli_z());
        let f = SpectralFunction::constant(0.5, PI);
        assert!(run_trace_f(&h, &f, 0.001, &TraceFOptions::default()).is_err());
    }
}
