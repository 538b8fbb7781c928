//! Clock construction: a gate sequence `U = U_{M-1} ... U_0` becomes
//! `W = sum_l |l+1><l| (x) U_l` (clock index mod `M`) and `A = (W + W^dag)/2`,
//! whose `M`-th moment encodes `Re Tr(U)`.
//!
//! Expanding `A^M = 2^{-M} sum_a C(M, a) W^{2a-M}` and using `Tr W^M = M Tr U`
//! and `Tr W^0 = M 2^n` gives
//! `2^M Tr(A^M) / (M 2^n) = 2 Re Tr(U) / 2^n + C(M, M/2)`.

use std::path::Path;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dqc1::{PowerKind, PreparedSchatten, Simulation, TraceFMode, TraceFOptions};
use crate::error::{Error, Result};
use crate::hamiltonian::{embed, matrix_to_rows, HamiltonianFile, LocalTerm, LogLocalHamiltonian, TermFile};
use crate::linalg::{self, c64, from_real, identity, unitarity_residual, CMatrix};
use crate::oracle::spectrum_with;
use crate::report::EstimateReport;

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    qubits: Vec<usize>,
    matrix: CMatrix,
}

impl Gate {
    pub fn new(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "gate on {} qubits needs a {dim}x{dim} matrix",
                qubits.len()
            )));
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(Error::InvalidInput(format!("repeated qubit in gate {qubits:?}")));
        }
        let residual = unitarity_residual(&matrix);
        if residual > 1e-10 {
            return Err(Error::InvalidInput(format!("gate is not unitary (residual {residual:e})")));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn identity_on(qubit: usize) -> Self {
        Self {
            qubits: vec![qubit],
            matrix: identity(2),
        }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }
}

/// `U = U_{M-1} ... U_1 U_0`, always padded with identities to a power of two
/// length `M >= 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    n: usize,
    gates: Vec<Gate>,
    original_len: usize,
}

impl GateSequence {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a circuit needs at least one qubit".into()));
        }
        if let Some(g) = gates.iter().find(|g| g.qubits.iter().any(|&q| q >= n)) {
            return Err(Error::InvalidInput(format!(
                "gate on {:?} exceeds the {n}-qubit register",
                g.qubits
            )));
        }
        let original_len = gates.len();
        let target = original_len.max(2).next_power_of_two();
        let mut gates = gates;
        gates.resize_with(target, || Gate::identity_on(0));
        Ok(Self {
            n,
            gates,
            original_len,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Padded length `M`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn clock_qubits(&self) -> usize {
        self.len().trailing_zeros() as usize
    }

    pub fn is_real(&self) -> bool {
        self.gates.iter().all(Gate::is_real)
    }

    /// Pads further to `2M` identities; `Re Tr(U)` is unchanged.
    pub fn doubled(&self) -> Self {
        let mut gates = self.gates.clone();
        gates.resize_with(2 * self.len(), || Gate::identity_on(0));
        Self {
            n: self.n,
            gates,
            original_len: self.original_len,
        }
    }

    /// Dense `U_{M-1} ... U_0` on `n` qubits.
    pub fn product(&self) -> CMatrix {
        let support: Vec<usize> = (0..self.n).collect();
        self.gates.iter().fold(identity(1 << self.n), |acc, g| {
            embed(&g.qubits, &g.matrix, &support) * acc
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: CircuitFile = serde_json::from_str(s)?;
        Self::from_circuit_file(&file)
    }

    fn from_file(file: &HamiltonianFile) -> Result<Self> {
        let gates = file
            .terms
            .iter()
            .map(|t| Gate::new(t.qubits.clone(), t.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.n, gates)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: CircuitFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::from_circuit_file(&file)
    }

    pub fn from_circuit_file(file: &CircuitFile) -> Result<Self> {
        Self::from_file(&HamiltonianFile {
            n: file.n,
            terms: file.gates.clone(),
        })
    }

    pub fn to_circuit_file(&self) -> CircuitFile {
        CircuitFile {
            n: self.n,
            gates: self.gates[..self.original_len]
                .iter()
                .map(|g| TermFile {
                    qubits: g.qubits.clone(),
                    matrix: matrix_to_rows(&g.matrix),
                })
                .collect(),
        }
    }
}

/// Circuit JSON: `{"n": int, "gates": [{"qubits": [int], "matrix": [[[re, im], ...], ...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub gates: Vec<TermFile>,
}

/// `W = sum_l |l+1 mod M><l| (x) U_l` on `[clock, system]`.
pub fn build_clock_unitary(seq: &GateSequence) -> Result<CMatrix> {
    build_clock_unitary_with(seq, &Config::default())
}

pub fn build_clock_unitary_with(seq: &GateSequence, config: &Config) -> Result<CMatrix> {
    config.check_dense(seq.n + seq.clock_qubits())?;
    let m = seq.len();
    let sys = 1usize << seq.n;
    let support: Vec<usize> = (0..seq.n).collect();
    let mut w = CMatrix::zeros(m * sys, m * sys);
    for (l, g) in seq.gates.iter().enumerate() {
        let u = embed(&g.qubits, &g.matrix, &support);
        let next = (l + 1) % m;
        w.view_mut((next * sys, l * sys), (sys, sys)).copy_from(&u);
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClockHamiltonian {
    /// `(W + W^dag) / 2` on `log2 M + n` qubits.
    pub base: CMatrix,
    pub m: usize,
    pub n: usize,
}

pub fn clock_hamiltonian(seq: &GateSequence) -> Result<ClockHamiltonian> {
    let w = build_clock_unitary(seq)?;
    let base = (&w + w.adjoint()).map(|z| z * 0.5);
    Ok(ClockHamiltonian {
        base,
        m: seq.len(),
        n: seq.n,
    })
}

/// The same `A` as a sum of `M` terms `(|l+1><l| (x) U_l + h.c.)/2`, each on
/// the clock register plus the gate's qubits. Clock qubits come first.
pub fn clock_local_hamiltonian(seq: &GateSequence) -> Result<LogLocalHamiltonian> {
    let c = seq.clock_qubits();
    let m = seq.len();
    let terms = seq
        .gates
        .iter()
        .enumerate()
        .map(|(l, g)| {
            let mut qubits: Vec<usize> = (0..c).collect();
            qubits.extend(g.qubits.iter().map(|q| q + c));
            let gd = g.matrix.nrows();
            let mut shift = CMatrix::zeros(m, m);
            shift[((l + 1) % m, l)] = c64(1.0, 0.0);
            let hop = shift.kronecker(&g.matrix);
            let term = (&hop + hop.adjoint()).map(|z| z * 0.5);
            debug_assert_eq!(term.nrows(), m * gd);
            LocalTerm::symmetrized(qubits, term)
        })
        .collect::<Result<Vec<_>>>()?;
    LogLocalHamiltonian::new(c + seq.n, terms)
}

/// `C(M, M/2)`.
pub fn central_binomial(m: usize) -> f64 {
    (1..=m / 2).fold(1.0, |acc, i| acc * (m / 2 + i) as f64 / i as f64)
}

/// Both sides of the trace identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub m: usize,
    /// `(2^M Tr(A^M) / dim - C(M, M/2)) / 2`.
    pub lhs: f64,
    /// `Re Tr(U) / 2^n`.
    pub rhs: f64,
    pub residual: f64,
    /// `2^M Tr(A^M) / dim` without the balanced-word correction.
    pub uncorrected_lhs: f64,
    pub uncorrected_residual: f64,
}

pub fn hardness_identity_check(seq: &GateSequence) -> Result<IdentityCheck> {
    let config = Config::default();
    let a = clock_hamiltonian(seq)?;
    let spec = spectrum_with(&a.base, &config)?;
    let m = seq.len();
    let scaled_moment = 2f64.powi(m as i32) * spec.power_mean(m as u32);
    let lhs = (scaled_moment - central_binomial(m)) / 2.0;
    let rhs = linalg::trace(&seq.product()).re / (1u64 << seq.n) as f64;
    Ok(IdentityCheck {
        m,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        uncorrected_lhs: scaled_moment,
        uncorrected_residual: (scaled_moment - rhs).abs(),
    })
}

/// `|Tr(W^M) - M Tr(U)|`.
pub fn clock_power_residual(seq: &GateSequence) -> Result<f64> {
    let w = build_clock_unitary(seq)?;
    let lhs = linalg::trace(&linalg::matrix_power(&w, seq.len() as u64));
    let rhs = linalg::trace(&seq.product()) * seq.len() as f64;
    Ok((lhs - rhs).norm())
}

/// A clock-Hamiltonian moment circuit built once and sampled per seed.
#[derive(Clone, Debug)]
pub struct PreparedReduction {
    pub m: usize,
    pub eps: f64,
    pub truth: f64,
    inner: PreparedSchatten,
}

impl PreparedReduction {
    pub fn new(seq: &GateSequence, eps: f64, simulation: Simulation, config: &Config) -> Result<Self> {
        let m = seq.len();
        let h = clock_local_hamiltonian(seq)?;
        let inner_eps = eps / 2f64.powi(m as i32 - 1);
        let inner = PreparedSchatten::new(&h, m as u32, inner_eps, PowerKind::Signed, simulation, config)?;
        let truth = linalg::trace(&seq.product()).re / (1u64 << seq.n) as f64;
        Ok(Self { m, eps, truth, inner })
    }

    pub fn report(&mut self, mode: TraceFMode, seed: u64) -> Result<EstimateReport> {
        let start = Instant::now();
        let moment = self.inner.report(mode, seed)?;
        let factor = 2f64.powi(self.m as i32 - 1);
        let mut report = moment.clone();
        report.value = factor * moment.value - central_binomial(self.m) / 2.0;
        report.claimed_bound = factor * moment.claimed_bound;
        if let Some(b) = report.budget.as_mut() {
            b.eps = self.eps;
        }
        Ok(report.with_truth(self.truth).with_elapsed(start))
    }
}

/// End-to-end reduction: estimates `Tr(A^M)/dim` on the quantum path at
/// accuracy `eps / 2^{M-1}` and recovers `Re Tr(U) / 2^n`.
pub fn reduction_pipeline(seq: &GateSequence, eps: f64, options: &TraceFOptions) -> Result<EstimateReport> {
    let start = Instant::now();
    let mut prepared = PreparedReduction::new(seq, eps, options.simulation, &options.config)?;
    Ok(prepared.report(options.mode, options.seed)?.with_elapsed(start))
}

/// Haar-like random orthogonal matrix (QR of a Gaussian matrix, signs fixed).
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    from_real(&q)
}

/// `gates` random real gates on one or two qubits of an `n`-qubit register.
pub fn random_real_circuit(n: usize, gates: usize, seed: u64) -> GateSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = (0..gates)
        .map(|_| {
            let k = if n >= 2 && rng.random_bool(0.5) { 2 } else { 1 };
            let mut qubits = rand::seq::index::sample(&mut rng, n, k).into_vec();
            qubits.sort_unstable();
            Gate::new(qubits, random_orthogonal(1 << k, &mut rng)).expect("orthogonal gate")
        })
        .collect();
    GateSequence::new(n, list).expect("valid random circuit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::assemble_dense;
    use crate::linalg::{max_abs, pauli_x, hermiticity_residual};
    use crate::oracle::spectrum;
    use std::f64::consts::PI;

    fn ry(theta: f64) -> CMatrix {
        let (s, c) = (theta / 2.0).sin_cos();
        from_real(&DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
    }

    #[test]
    fn padding_to_power_of_two() {
        let seq = GateSequence::new(1, vec![Gate::new(vec![0], pauli_x()).unwrap(); 3]).unwrap();
        assert_eq!(seq.len(), 4);
        assert_eq!(seq.original_len(), 3);
        assert_eq!(GateSequence::new(1, vec![]).unwrap().len(), 2);
    }

    #[test]
    fn identity_circuit_m2() {
        let seq = GateSequence::new(1, vec![Gate::identity_on(0); 2]).unwrap();
        let w = build_clock_unitary(&seq).unwrap();
        assert!(max_abs(&(&w * &w - identity(4))) < 1e-15);
        let check = hardness_identity_check(&seq).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12 && (check.rhs - 1.0).abs() < 1e-15);
        assert!((check.uncorrected_lhs - 4.0).abs() < 1e-12);
    }

    #[test]
    fn xx_circuit_squares_to_identity() {
        let seq = GateSequence::new(1, vec![Gate::new(vec![0], pauli_x()).unwrap(); 2]).unwrap();
        let w = build_clock_unitary(&seq).unwrap();
        assert!(max_abs(&(&w * &w - identity(4))) < 1e-15);
    }

    #[test]
    fn clock_power_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gates = (0..4)
            .map(|_| Gate::new(vec![0], random_orthogonal(2, &mut rng)).unwrap())
            .collect();
        let seq = GateSequence::new(1, gates).unwrap();
        assert!(clock_power_residual(&seq).unwrap() < 1e-9);
    }

    #[test]
    fn identity_circuit_spectrum_is_circulant() {
        for m in [2usize, 4, 8] {
            let seq = GateSequence::new(1, vec![Gate::identity_on(0); m]).unwrap();
            let a = clock_hamiltonian(&seq).unwrap();
            let got = spectrum(&a.base).unwrap().eigenvalues;
            let mut want: Vec<f64> = (0..m)
                .flat_map(|l| {
                    let v = (2.0 * PI * l as f64 / m as f64).cos();
                    [v, v]
                })
                .collect();
            want.sort_by(f64::total_cmp);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hamiltonian_is_bounded_and_hermitian() {
        for seed in 0..5 {
            let seq = random_real_circuit(2, 3, seed);
            let a = clock_hamiltonian(&seq).unwrap();
            assert!(hermiticity_residual(&a.base) <= 1e-12);
            assert!(spectrum(&a.base).unwrap().norm <= 1.0 + 1e-10);
            let local = assemble_dense(&clock_local_hamiltonian(&seq).unwrap()).unwrap();
            assert!(max_abs(&(local - &a.base)) < 1e-12);
        }
    }

    #[test]
    fn traceless_circuit() {
        let seq = GateSequence::new(1, vec![Gate::new(vec![0], pauli_x()).unwrap()]).unwrap();
        let check = hardness_identity_check(&seq).unwrap();
        assert_eq!(check.rhs, 0.0);
        assert!(check.residual <= 1e-8);
    }

    #[test]
    fn random_orthogonal_circuits() {
        for seed in 0..6 {
            let seq = random_real_circuit(2, 4, seed);
            assert!(seq.is_real());
            assert!(hardness_identity_check(&seq).unwrap().residual <= 1e-8);
        }
    }

    #[test]
    fn padding_preserves_identity() {
        let seq = GateSequence::new(1, vec![Gate::new(vec![0], ry(0.7)).unwrap(); 2]).unwrap();
        let a = hardness_identity_check(&seq).unwrap();
        let b = hardness_identity_check(&seq.doubled()).unwrap();
        assert!((a.rhs - b.rhs).abs() < 1e-15);
        assert!(a.residual <= 1e-8 && b.residual <= 1e-8);
    }

    #[test]
    fn pipeline_identity_circuit() {
        let seq = GateSequence::new(1, vec![Gate::identity_on(0); 2]).unwrap();
        let r = reduction_pipeline(&seq, 0.2, &TraceFOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() <= 0.2, "{}", r.value);
    }

    #[test]
    fn pipeline_rotation_circuit() {
        let seq = GateSequence::new(1, vec![Gate::new(vec![0], ry(0.9)).unwrap(), Gate::new(vec![0], ry(0.4)).unwrap()])
            .unwrap();
        let r = reduction_pipeline(&seq, 0.2, &TraceFOptions::default()).unwrap();
        let want = (1.3f64 / 2.0).cos();
        assert!((r.truth.unwrap() - want).abs() < 1e-12);
        assert!((r.value - want).abs() <= 0.2);
    }

    #[test]
    fn binomials() {
        assert_eq!(central_binomial(2), 2.0);
        assert_eq!(central_binomial(4), 6.0);
        assert_eq!(central_binomial(8), 70.0);
    }

    #[test]
    fn circuit_json_round_trip() {
        let seq = random_real_circuit(2, 3, 9);
        let text = serde_json::to_string(&seq.to_circuit_file()).unwrap();
        let file: CircuitFile = serde_json::from_str(&text).unwrap();
        assert_eq!(GateSequence::from_circuit_file(&file).unwrap(), seq);
    }
}
