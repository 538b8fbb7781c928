//! Hamiltonian representations: log-local sums of Hermitian terms and
//! explicit sparse Hermitian matrices.

mod io;
mod random;
mod sparse;

pub use io::{ComplexEntry, HamiltonianFile, TermFile};
pub(crate) use io::matrix_to_rows;
pub use random::{random_hermitian, random_local_hamiltonian, random_unitary};
pub use sparse::{MatrixClass, SparseHermitian};

use std::path::Path;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, hermiticity_residual, CMatrix};

/// A Hermitian operator acting on an ordered subset of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    qubits: Vec<usize>,
    matrix: CMatrix,
}

impl LocalTerm {
    /// Validates shape and Hermiticity (max-norm residual ≤ `tol_herm`).
    pub fn new(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(qubits, matrix, Config::default().tol_herm)
    }

    pub fn with_tolerance(qubits: Vec<usize>, matrix: CMatrix, tol_herm: f64) -> Result<Self> {
        check_qubit_list(&qubits)?;
        let dim = 1usize << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "term on {} qubits needs a {dim}x{dim} matrix, got {}x{}",
                qubits.len(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let residual = hermiticity_residual(&matrix);
        if residual > tol_herm {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { qubits, matrix })
    }

    /// Replaces the matrix by `(M + M^†)/2` before validation.
    pub fn symmetrized(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let sym = (&matrix + matrix.adjoint()).map(|z| z * 0.5);
        Self::new(qubits, sym)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn locality(&self) -> usize {
        self.qubits.len()
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.matrix).unwrap_or_else(|_| linalg::spectral_norm(&self.matrix))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            qubits: self.qubits.clone(),
            matrix: self.matrix.map(|z| z * s),
        }
    }

    /// Embeds the term into the register `support` (sorted, containing every
    /// qubit of the term), returning a `2^|support|` square matrix.
    pub fn embed_into(&self, support: &[usize]) -> CMatrix {
        embed(&self.qubits, &self.matrix, support)
    }
}

/// Sum `A = sum_j A_j` of local Hermitian terms on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LogLocalHamiltonian {
    n: usize,
    terms: Vec<LocalTerm>,
}

impl LogLocalHamiltonian {
    pub fn new(n: usize, terms: Vec<LocalTerm>) -> Result<Self> {
        Self::with_config(n, terms, &Config::default())
    }

    pub fn with_config(n: usize, terms: Vec<LocalTerm>, config: &Config) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a Hamiltonian needs at least one qubit".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidInput("a Hamiltonian needs at least one term".into()));
        }
        let k_max = config.max_locality(n);
        for (j, term) in terms.iter().enumerate() {
            if let Some(&q) = term.qubits.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidInput(format!(
                    "term {j} acts on qubit {q} but the register has {n} qubits"
                )));
            }
            if term.locality() > k_max {
                return Err(Error::InvalidInput(format!(
                    "term {j} is {}-local, exceeding the log-local limit {k_max} for n = {n}",
                    term.locality()
                )));
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `zeta = max_j |A_j|`.
    pub fn term_norm_bound(&self) -> f64 {
        self.terms.iter().map(LocalTerm::operator_norm).fold(0.0, f64::max)
    }

    /// `sum_j |A_j|`, an upper bound on `|A|`.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(LocalTerm::operator_norm).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|t| t.scaled(s)).collect(),
        }
    }

    pub fn with_term(&self, term: LocalTerm) -> Result<Self> {
        let mut terms = self.terms.clone();
        terms.push(term);
        Self::new(self.n, terms)
    }

    pub fn from_file_repr(file: &HamiltonianFile, config: &Config) -> Result<Self> {
        let mut terms = Vec::with_capacity(file.terms.len());
        for (j, t) in file.terms.iter().enumerate() {
            let matrix = t.to_matrix().map_err(|e| prefix_err(e, j))?;
            let term = LocalTerm::with_tolerance(t.qubits.clone(), matrix, config.tol_herm)
                .map_err(|e| prefix_err(e, j))?;
            terms.push(term);
        }
        Self::with_config(file.n, terms, config)
    }

    pub fn to_file_repr(&self) -> HamiltonianFile {
        HamiltonianFile {
            n: self.n,
            terms: self.terms.iter().map(TermFile::from_term).collect(),
        }
    }

    pub fn from_json_str(s: &str, config: &Config) -> Result<Self> {
        let file: HamiltonianFile = serde_json::from_str(s)?;
        Self::from_file_repr(&file, config)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_repr()).expect("hamiltonian serialises")
    }

    pub fn load(path: impl AsRef<Path>, config: &Config) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: HamiltonianFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::from_file_repr(&file, config)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }
}

fn prefix_err(e: Error, term: usize) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::InvalidInput(format!("term {term}: {msg}")),
        other => other,
    }
}

fn check_qubit_list(qubits: &[usize]) -> Result<()> {
    let mut seen = qubits.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != qubits.len() {
        return Err(Error::InvalidInput(format!("repeated qubit index in {qubits:?}")));
    }
    if qubits.len() > 24 {
        return Err(Error::InvalidInput("local terms are limited to 24 qubits".into()));
    }
    Ok(())
}

/// Embeds `matrix` (acting on `term_qubits`, first listed qubit most
/// significant) into the register `support`, acting as identity elsewhere.
pub fn embed(term_qubits: &[usize], matrix: &CMatrix, support: &[usize]) -> CMatrix {
    let t = support.len();
    let k = term_qubits.len();
    let dim = 1usize << t;
    // bit shift inside the support index for each term qubit
    let shifts: Vec<usize> = term_qubits
        .iter()
        .map(|q| {
            let pos = support
                .iter()
                .position(|s| s == q)
                .unwrap_or_else(|| panic!("qubit {q} is not in the support {support:?}"));
            t - 1 - pos
        })
        .collect();
    let term_mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let spread = |local: usize| -> usize {
        (0..k)
            .filter(|&b| local >> (k - 1 - b) & 1 == 1)
            .map(|b| 1usize << shifts[b])
            .sum()
    };
    let gather = |full: usize| -> usize {
        (0..k).fold(0usize, |acc, b| (acc << 1) | (full >> shifts[b] & 1))
    };
    let spread_table: Vec<usize> = (0..1usize << k).map(spread).collect();

    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let local_row = gather(row);
        let rest = row & !term_mask;
        for (local_col, &bits) in spread_table.iter().enumerate() {
            let z = matrix[(local_row, local_col)];
            if z.re != 0.0 || z.im != 0.0 {
                out[(row, rest | bits)] = z;
            }
        }
    }
    out
}

/// Dense `2^n x 2^n` matrix of `H = sum_j A_j`.
pub fn assemble_dense(h: &LogLocalHamiltonian) -> Result<CMatrix> {
    assemble_dense_with(h, &Config::default())
}

pub fn assemble_dense_with(h: &LogLocalHamiltonian, config: &Config) -> Result<CMatrix> {
    config.check_dense(h.n)?;
    let support: Vec<usize> = (0..h.n).collect();
    let dim = 1usize << h.n;
    let mut out = CMatrix::zeros(dim, dim);
    for term in &h.terms {
        out += term.embed_into(&support);
    }
    Ok(out)
}

/// Operator norm `max_j |lambda_j|` of a Hermitian matrix.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    let values = linalg::hermitian_eigenvalues(m)?;
    Ok(values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
}
