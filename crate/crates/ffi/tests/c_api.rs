use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use schatten_ffi::*;

fn fixture(rel: &str) -> CString {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", rel].iter().collect();
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = schatten_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn hamiltonian_round_trip() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(schatten_hamiltonian_load(fixture("hamiltonians/z_half.json").as_ptr(), &mut h), SchattenStatus::Ok);
        assert_eq!(schatten_hamiltonian_qubits(h), 1);
        let mut exact = 0.0;
        assert_eq!(schatten_hamiltonian_abs_power_mean(h, 2.0, &mut exact), SchattenStatus::Ok);
        assert!((exact - 0.25).abs() < 1e-14);
        let mut est = SchattenEstimate::default();
        let status = schatten_dqc1_schatten(h, 2, 0.1, false, SchattenReadout::ExactSubmatrix, 0.05, 0, &mut est);
        assert_eq!(status, SchattenStatus::Ok);
        assert!((est.value - exact).abs() <= est.claimed_bound);
        schatten_hamiltonian_free(h);
    }
}

#[test]
fn walker_on_cycle() {
    let mut a = ptr::null_mut();
    unsafe {
        assert_eq!(schatten_sparse_load(fixture("graphs/cycle8.txt").as_ptr(), &mut a), SchattenStatus::Ok);
        assert_eq!(schatten_sparse_dim(a), 8);
        let mut est = SchattenEstimate::default();
        let status = schatten_walk_trace(a, 2, 0.1, 0.1, 0.05, SchattenWalkMode::Exhaustive, 0, &mut est);
        assert_eq!(status, SchattenStatus::Ok);
        assert!((est.value - 2.0).abs() < 1e-12);
        let mut energy = 0.0;
        assert_eq!(schatten_sparse_abs_power_mean(a, 1.0, &mut energy), SchattenStatus::Ok);
        assert!(energy > 1.0);
        schatten_sparse_free(a);
    }
}

#[test]
fn errors_are_reported() {
    let mut h = ptr::null_mut();
    let missing = CString::new("/nonexistent/h.json").unwrap();
    unsafe {
        assert_eq!(schatten_hamiltonian_load(missing.as_ptr(), &mut h), SchattenStatus::Io);
        assert!(h.is_null());
        assert!(last_error().contains("/nonexistent/h.json"));
        assert_eq!(schatten_hamiltonian_load(ptr::null(), &mut h), SchattenStatus::NullPointer);
        let mut est = SchattenEstimate::default();
        let status = schatten_walk_trace(ptr::null(), 2, 0.1, 0.1, 0.05, SchattenWalkMode::Corrected, 0, &mut est);
        assert_eq!(status, SchattenStatus::NullPointer);
        schatten_hamiltonian_free(ptr::null_mut());
    }
}

#[test]
fn invalid_parameters_map_to_invalid_input() {
    let mut h = ptr::null_mut();
    unsafe {
        schatten_hamiltonian_load(fixture("hamiltonians/z_half.json").as_ptr(), &mut h);
        let mut est = SchattenEstimate::default();
        let status = schatten_dqc1_schatten(h, 0, 0.1, false, SchattenReadout::Sampled, 0.05, 1, &mut est);
        assert_eq!(status, SchattenStatus::InvalidInput);
        assert!(last_error().contains("p must be"));
        schatten_hamiltonian_free(h);
    }
}

#[test]
fn header_declares_entry_points() {
    let header: PathBuf = [env!("CARGO_MANIFEST_DIR"), "include", "schatten.h"].iter().collect();
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["schatten_hamiltonian_load", "schatten_walk_trace", "schatten_last_error", "SchattenEstimate"] {
        assert!(text.contains(name), "{name} missing from header");
    }
}
