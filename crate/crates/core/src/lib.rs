//! Estimators for traces of matrix functions, Schatten p-norms and graph
//! energy.
//!
//! Two families are provided. The quantum one simulates a one-clean-qubit
//! circuit: phase estimation of `e^{iA}` for a log-local Hamiltonian `A`,
//! a controlled rotation encoding `f(lambda)`, and a readout of the clean
//! qubit ([`dqc1`]). The classical one estimates diagonal entries of `A^p`
//! for sparse matrices by random walks ([`walk`]). [`oracle`] computes the
//! exact values both are checked against, [`clock`] builds the
//! clock Hamiltonian whose moments encode the trace of a gate sequence, and
//! [`graphs`] samples Chung-Lu random graphs for spectral experiments.
//!
//! ```
//! use schatten_core::dqc1::{estimate_schatten_trace, PowerKind, TraceFOptions};
//! use schatten_core::hamiltonian::{LocalTerm, LogLocalHamiltonian};
//! use schatten_core::linalg::pauli_z;
//!
//! let term = LocalTerm::new(vec![0], pauli_z().map(|z| z * 0.5)).unwrap();
//! let h = LogLocalHamiltonian::new(1, vec![term]).unwrap();
//! let r = estimate_schatten_trace(&h, 2, 0.1, PowerKind::Abs, &TraceFOptions::default()).unwrap();
//! assert!((r.value - 0.25).abs() <= r.claimed_bound);
//! ```

pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod oracle;
pub mod trotter;
pub mod dqc1;
pub mod report;
pub mod clock;
pub mod walk;
pub mod graphs;
pub mod harness;
