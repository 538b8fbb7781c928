use serde::{Deserialize, Serialize};

use super::LocalTerm;
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};

/// `[re, im]` pair as stored in JSON fixtures.
pub type ComplexEntry = [f64; 2];

/// On-disk form: `{"n": int, "terms": [{"qubits": [int], "matrix": [[[re, im], ...], ...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub n: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub qubits: Vec<usize>,
    /// Row-major.
    pub matrix: Vec<Vec<ComplexEntry>>,
}

impl TermFile {
    pub fn from_term(term: &LocalTerm) -> Self {
        Self {
            qubits: term.qubits().to_vec(),
            matrix: matrix_to_rows(term.matrix()),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        rows_to_matrix(&self.matrix)
    }
}

pub(crate) fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<ComplexEntry>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<ComplexEntry>]) -> Result<CMatrix> {
    let n = rows.len();
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::InvalidInput(format!(
            "matrix row {r} has {} entries, expected {n}",
            row.len()
        )));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| c64(rows[r][c][0], rows[r][c][1])))
}
