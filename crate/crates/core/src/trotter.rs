//! First-order Lie-Trotter simulation of `e^{iAt}` for log-local Hamiltonians.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hamiltonian::{assemble_dense_with, random_local_hamiltonian, LocalTerm, LogLocalHamiltonian};
use crate::linalg::{self, exp_i_hermitian, identity, matrix_power, spectral_norm, CMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterPlan {
    pub t: f64,
    pub delta: f64,
    /// Number of Trotter steps `r`.
    pub steps: u64,
    pub constant: f64,
    /// `max_j |A_j|`.
    pub zeta: f64,
    pub m: usize,
    /// `t * sum_j |A_j|`.
    pub tau: f64,
}

/// `r = max(1, ceil(C m^3 t^2 zeta^2 / delta))`.
pub fn plan_trotter(h: &LogLocalHamiltonian, t: f64, delta: f64) -> Result<TrotterPlan> {
    plan_trotter_with(h, t, delta, Config::default().trotter_constant)
}

pub fn plan_trotter_with(h: &LogLocalHamiltonian, t: f64, delta: f64, constant: f64) -> Result<TrotterPlan> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("simulation accuracy must lie in (0, 1], got {delta}")));
    }
    if !(constant > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput("Trotter constant must be positive and t finite".into()));
    }
    let m = h.num_terms();
    let zeta = h.term_norm_bound();
    let raw = constant * (m as f64).powi(3) * t * t * zeta * zeta / delta;
    if raw > 1e15 {
        return Err(Error::InvalidInput(format!("Trotter step count {raw:e} is out of range")));
    }
    Ok(TrotterPlan {
        t,
        delta,
        steps: (raw.ceil() as u64).max(1),
        constant,
        zeta,
        m,
        tau: t * h.norm_bound(),
    })
}

/// `(prod_j e^{i A_j t / r})^r`, each factor exponentiated exactly on its block.
pub fn trotter_unitary(h: &LogLocalHamiltonian, plan: &TrotterPlan) -> Result<CMatrix> {
    trotter_unitary_with(h, plan, &Config::default())
}

pub fn trotter_unitary_with(h: &LogLocalHamiltonian, plan: &TrotterPlan, config: &Config) -> Result<CMatrix> {
    config.check_dense(h.n())?;
    let step = trotter_step(h, plan.t / plan.steps as f64)?;
    Ok(matrix_power(&step, plan.steps))
}

/// One product `e^{iA_1 s} e^{iA_2 s} ... e^{iA_m s}`.
pub fn trotter_step(h: &LogLocalHamiltonian, s: f64) -> Result<CMatrix> {
    let support: Vec<usize> = (0..h.n()).collect();
    let mut step = identity(1 << h.n());
    for term in h.terms() {
        let block = exp_i_hermitian(term.matrix(), s)?;
        step *= crate::hamiltonian::embed(term.qubits(), &block, &support);
    }
    Ok(step)
}

/// Exact `|V - e^{iAt}|` (largest singular value of the difference).
pub fn certify_simulation(h: &LogLocalHamiltonian, v: &CMatrix, t: f64) -> Result<f64> {
    let a = assemble_dense_with(h, &Config::default())?;
    Ok(spectral_norm(&(v - exp_i_hermitian(&a, t)?)))
}

/// Largest deviation between the sorted eigenphases of `V` and the sorted
/// `lambda_j t`. Needs `|A| |t| <= pi - margin` so no phase wraps.
pub fn eigenphase_deviation(h: &LogLocalHamiltonian, v: &CMatrix, t: f64) -> Result<f64> {
    let config = Config::default();
    let a = assemble_dense_with(h, &config)?;
    let mut lambda: Vec<f64> = linalg::hermitian_eigenvalues(&a)?.iter().map(|l| l * t).collect();
    let norm = lambda.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    config.check_phase_range(norm)?;
    lambda.sort_by(f64::total_cmp);
    let mu = linalg::unitary_eigenphases(v)?;
    Ok(mu.iter().zip(&lambda).map(|(m, l)| (m - l).abs()).fold(0.0, f64::max))
}

/// Deterministic certification fixtures: `n <= 4`, `m <= 4`, pre-scaled so
/// that `sum_j |A_j| = pi - margin`.
pub fn trotter_fixtures() -> Vec<LogLocalHamiltonian> {
    let limit = Config::default().phase_limit();
    let mut out: Vec<LogLocalHamiltonian> = (0..16u64)
        .map(|seed| {
            let n = 1 + (seed % 4) as usize;
            let m = 1 + ((seed / 4) % 4) as usize;
            let h = random_local_hamiltonian(n, m, n.min(2), 1000 + seed);
            h.scaled(limit / h.norm_bound())
        })
        .collect();
    let half = 0.5 * limit;
    out.push(
        LogLocalHamiltonian::new(
            1,
            vec![
                LocalTerm::new(vec![0], linalg::pauli_x().map(|z| z * half)).expect("Hermitian"),
                LocalTerm::new(vec![0], linalg::pauli_z().map(|z| z * half)).expect("Hermitian"),
            ],
        )
        .expect("valid fixture"),
    );
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub constant: f64,
    pub worst_ratio: f64,
    pub checks: usize,
}

/// Starts at `C = 1` and doubles until every fixture satisfies
/// `|V - e^{iA}| <= delta` for every `delta` given.
pub fn calibrate_constant(fixtures: &[LogLocalHamiltonian], deltas: &[f64]) -> Result<Calibration> {
    let mut constant = 1.0;
    for _ in 0..20 {
        let mut worst_ratio = 0.0_f64;
        let mut checks = 0;
        for h in fixtures {
            for &delta in deltas {
                let plan = plan_trotter_with(h, 1.0, delta, constant)?;
                let v = trotter_unitary(h, &plan)?;
                worst_ratio = worst_ratio.max(certify_simulation(h, &v, 1.0)? / delta);
                checks += 1;
            }
        }
        if worst_ratio <= 1.0 {
            return Ok(Calibration {
                constant,
                worst_ratio,
                checks,
            });
        }
        constant *= 2.0;
    }
    Err(Error::InvalidInput("Trotter calibration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CALIBRATED_TROTTER_CONSTANT;
    use crate::linalg::{max_abs, pauli_x, pauli_z, unitarity_residual};
    use std::f64::consts::PI;

    fn single(q: usize, m: CMatrix) -> LocalTerm {
        LocalTerm::new(vec![q], m).unwrap()
    }

    #[test]
    fn z_at_pi_is_minus_identity() {
        let h = LogLocalHamiltonian::new(1, vec![single(0, pauli_z())]).unwrap();
        let plan = plan_trotter(&h, PI, 0.1).unwrap();
        let v = trotter_unitary(&h, &plan).unwrap();
        assert!(max_abs(&(v + identity(2))) < 1e-10);
        assert!(certify_simulation(&h, &trotter_unitary(&h, &plan).unwrap(), PI).unwrap() < 1e-10);
    }

    #[test]
    fn commuting_terms_exact_for_any_r() {
        let h = LogLocalHamiltonian::new(2, vec![single(0, pauli_z()), single(1, pauli_z())]).unwrap();
        for steps in [1, 2, 7] {
            let plan = TrotterPlan {
                steps,
                ..plan_trotter(&h, 0.9, 0.5).unwrap()
            };
            let v = trotter_unitary(&h, &plan).unwrap();
            assert!(certify_simulation(&h, &v, 0.9).unwrap() < 1e-12);
        }
    }

    #[test]
    fn anticommuting_pair_meets_delta() {
        let h = LogLocalHamiltonian::new(1, vec![single(0, pauli_x()), single(0, pauli_z())]).unwrap();
        let plan = plan_trotter(&h, 1.0, 1e-3).unwrap();
        assert_eq!(plan.steps, 8000);
        let v = trotter_unitary(&h, &plan).unwrap();
        assert!(unitarity_residual(&v) < 1e-10);
        assert!(certify_simulation(&h, &v, 1.0).unwrap() <= 1e-3);
    }

    #[test]
    fn halving_delta_doubles_steps() {
        let h = LogLocalHamiltonian::new(1, vec![single(0, pauli_x()), single(0, pauli_z())]).unwrap();
        let a = plan_trotter(&h, 1.0, 1e-2).unwrap();
        let b = plan_trotter(&h, 1.0, 5e-3).unwrap();
        assert!(b.steps >= 2 * a.steps);
        assert!(plan_trotter(&h, 1.0, 0.0).is_err());
    }

    #[test]
    fn single_step_error_tracks_commutator() {
        // For r = 1 the leading error is |[X, Z]| t^2 / 2 = t^2 (|[X, Z]| = 2).
        let h = LogLocalHamiltonian::new(1, vec![single(0, pauli_x()), single(0, pauli_z())]).unwrap();
        let t = 0.1;
        let plan = TrotterPlan {
            steps: 1,
            ..plan_trotter(&h, t, 1.0).unwrap()
        };
        let err = certify_simulation(&h, &trotter_unitary(&h, &plan).unwrap(), t).unwrap();
        let leading = t * t;
        assert!(err > leading / 2.0 && err < leading * 2.0, "{err} vs {leading}");
    }

    #[test]
    fn certify_distance_examples() {
        let h = LogLocalHamiltonian::new(1, vec![single(0, pauli_z())]).unwrap();
        assert!((certify_simulation(&h, &identity(2), PI).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenphases_follow_spectrum() {
        for h in trotter_fixtures().iter().take(6) {
            let plan = plan_trotter(h, 1.0, 1e-2).unwrap();
            let v = trotter_unitary(h, &plan).unwrap();
            assert!(eigenphase_deviation(h, &v, 1.0).unwrap() <= PI * 1e-2 / 2.0);
        }
    }

    #[test]
    fn doubling_steps_does_not_increase_error() {
        let fixtures = trotter_fixtures();
        let mut worse = 0;
        for h in fixtures.iter().filter(|h| h.num_terms() > 1) {
            let base = plan_trotter(h, 1.0, 0.5).unwrap();
            let doubled = TrotterPlan {
                steps: base.steps * 2,
                ..base.clone()
            };
            let e1 = certify_simulation(h, &trotter_unitary(h, &base).unwrap(), 1.0).unwrap();
            let e2 = certify_simulation(h, &trotter_unitary(h, &doubled).unwrap(), 1.0).unwrap();
            if e2 > e1 + 1e-12 {
                worse += 1;
            }
        }
        assert_eq!(worse, 0);
    }

    #[test]
    fn recorded_constant_matches_calibration() {
        let cal = calibrate_constant(&trotter_fixtures(), &[1e-1, 1e-2]).unwrap();
        assert_eq!(cal.constant, CALIBRATED_TROTTER_CONSTANT);
    }
}
