use schatten_core::hamiltonian::{assemble_dense, random_local_hamiltonian, LogLocalHamiltonian, SparseHermitian};
use schatten_core::config::Config;
use schatten_core::linalg::{matrix_power, trace};
use schatten_core::oracle::{graph_energy, schatten_p_norm, spectrum, trace_f, trace_power_exact_local, SpectralFunction};

fn fixture(rel: &str) -> std::path::PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", rel].iter().collect()
}

#[test]
fn local_expansion_matches_dense_power() {
    for seed in 0..6 {
        let h = random_local_hamiltonian(3, 3, 2, seed);
        let a = assemble_dense(&h).unwrap();
        for p in 1..=4u32 {
            let dense = trace(&matrix_power(&a, u64::from(p))).re / 8.0;
            let local = trace_power_exact_local(&h, p).unwrap();
            assert!((dense - local).abs() < 1e-10 * dense.abs().max(1.0), "seed {seed} p {p}");
        }
    }
}

#[test]
fn fixture_hamiltonian_spectrum() {
    let h = LogLocalHamiltonian::load(fixture("hamiltonians/xz_pair.json"), &Config::default()).unwrap();
    let s = spectrum(&assemble_dense(&h).unwrap()).unwrap();
    // 0.75 X_0 + 0.5 Z_0 Z_1: eigenvalues +-sqrt(0.75^2 + 0.5^2), each twice.
    let e = (0.75f64.powi(2) + 0.25).sqrt();
    assert!((s.norm - e).abs() < 1e-12);
    assert!((s.abs_power_mean(2.0) - e * e).abs() < 1e-12);
    assert!(s.power_mean(3).abs() < 1e-12);
}

#[test]
fn cycle_energy_and_norms() {
    let c8 = SparseHermitian::load(fixture("graphs/cycle8.txt")).unwrap();
    let expected = (0..8).map(|k| (2.0 * (std::f64::consts::PI * k as f64 / 4.0).cos()).abs()).sum::<f64>() / 8.0;
    assert!((graph_energy(&c8).unwrap() - expected).abs() < 1e-10);
    let dense = c8.to_dense();
    let s2 = schatten_p_norm(&dense, 2.0).unwrap();
    let frob = (2.0 * 8.0 / 8.0f64).sqrt();
    assert!((s2 - frob).abs() < 1e-10, "{s2}");
}

#[test]
fn constant_function_is_constant() {
    let h = random_local_hamiltonian(2, 2, 2, 9);
    let a = assemble_dense(&h).unwrap();
    let f = SpectralFunction::constant(0.4, 10.0);
    assert!((trace_f(&a, &f).unwrap() - 0.4).abs() < 1e-14);
}
