use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{LocalTerm, LogLocalHamiltonian};
use crate::linalg::{c64, exp_i_hermitian, CMatrix};

fn gaussian_hermitian<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// GUE-style random Hermitian matrix.
pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    gaussian_hermitian(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random unitary `e^{i pi H}` for a random Hermitian `H`.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    exp_i_hermitian(&random_hermitian(dim, seed), std::f64::consts::PI)
        .expect("random Hermitian matrices diagonalise")
}

/// `m` random Hermitian terms, each on `k` distinct qubits chosen uniformly.
pub fn random_local_hamiltonian(n: usize, m: usize, k: usize, seed: u64) -> LogLocalHamiltonian {
    assert!(k >= 1 && k <= n, "locality must lie in 1..=n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..m)
        .map(|_| {
            let mut qubits = sample(&mut rng, n, k).into_vec();
            qubits.sort_unstable();
            let matrix = gaussian_hermitian(1 << k, &mut rng);
            LocalTerm::new(qubits, matrix).expect("symmetrised by construction")
        })
        .collect();
    LogLocalHamiltonian::new(n, terms).expect("valid random Hamiltonian")
}
