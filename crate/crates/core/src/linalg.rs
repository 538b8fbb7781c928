//! Dense complex linear algebra used across the crate.
//!
//! Basis convention: qubit 0 is the most significant bit of a computational
//! basis index, so `|q0 q1 ... q_{n-1}>` has index `sum_i q_i 2^{n-1-i}`.

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)])
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c64(h, 0.), c64(h, 0.), c64(h, 0.), c64(-h, 0.)])
}

pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| c64(x, 0.0))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |M - M^†|` entrywise.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |U^† U - I|` entrywise.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    max_abs(&(prod - identity(u.ncols())))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending with the
/// eigenvectors permuted to match.
pub fn hermitian_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure(format!("no convergence for {n}x{n} matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eigh(m).map(|(values, _)| values)
}

/// `e^{i t H}` for Hermitian `H`, by exact diagonalisation.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigh(h)?;
    let mut scaled = vectors.clone();
    for (j, lambda) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, lambda * t);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    Ok(scaled * vectors.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

/// Eigenvalues of a normal matrix via the complex Schur form.
pub fn normal_eigenvalues(u: &CMatrix) -> Result<Vec<C64>> {
    let n = u.nrows();
    let schur = Schur::try_new(u.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure(format!("Schur form did not converge for {n}x{n}")))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Eigenphases in `(-pi, pi]` and orthonormal eigenvectors of a unitary,
/// read off the (numerically diagonal) Schur form.
pub fn unitary_eigh(u: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = u.nrows();
    let schur = Schur::try_new(u.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure(format!("Schur form did not converge for {n}x{n}")))?;
    let (q, t) = schur.unpack();
    Ok(((0..n).map(|i| t[(i, i)].arg()).collect(), q))
}

/// Eigenphases `arg(e^{i mu})` of a unitary, each in `(-pi, pi]`, ascending.
pub fn unitary_eigenphases(u: &CMatrix) -> Result<Vec<f64>> {
    let mut phases: Vec<f64> = normal_eigenvalues(u)?.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// `m^e` by repeated squaring.
pub fn matrix_power(m: &CMatrix, mut e: u64) -> CMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Dense real matrix power by repeated squaring.
pub fn real_matrix_power(m: &DMatrix<f64>, mut e: u32) -> DMatrix<f64> {
    let mut result = DMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}
