use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, hermiticity_residual, CMatrix, C64};

/// Entry alphabet of a sparse matrix. Each class contains the previous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixClass {
    ZeroOne,
    SignedUnit,
    WeightedReal,
}

impl MatrixClass {
    pub fn admits(self, z: C64) -> bool {
        match self {
            MatrixClass::ZeroOne => z.im == 0.0 && (z.re == 0.0 || z.re == 1.0),
            MatrixClass::SignedUnit => z.im == 0.0 && (z.re == 0.0 || z.re.abs() == 1.0),
            MatrixClass::WeightedReal => z.im == 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixClass::ZeroOne => "zero_one",
            MatrixClass::SignedUnit => "signed_unit",
            MatrixClass::WeightedReal => "weighted_real",
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_one" => Ok(MatrixClass::ZeroOne),
            "signed_unit" => Ok(MatrixClass::SignedUnit),
            "weighted_real" => Ok(MatrixClass::WeightedReal),
            other => Err(Error::InvalidInput(format!("unknown matrix class {other:?}"))),
        }
    }
}

/// Explicit Hermitian matrix stored by rows; doubles as a weighted graph.
///
/// Rows are sorted by column, so the `r`-th stored entry of row `i` is the
/// `r`-th neighbour of vertex `i`. Self-loops are ordinary entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    rows: Vec<Vec<(usize, C64)>>,
    sparsity: usize,
    max_entry: f64,
    /// `None` for genuinely complex matrices.
    class: Option<MatrixClass>,
}

impl SparseHermitian {
    /// Builds from per-row entries; rejects asymmetric patterns or values.
    pub fn from_rows(rows: Vec<Vec<(usize, C64)>>) -> Result<Self> {
        let dim = rows.len();
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            row.retain(|(_, z)| z.re != 0.0 || z.im != 0.0);
            row.sort_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidInput(format!("row {i} has a repeated column")));
            }
            if let Some(&(j, _)) = row.iter().find(|&&(j, _)| j >= dim) {
                return Err(Error::InvalidInput(format!("row {i} references column {j} >= {dim}")));
            }
        }
        let mut out = Self {
            dim,
            rows,
            sparsity: 0,
            max_entry: 0.0,
            class: None,
        };
        for i in 0..dim {
            for &(j, z) in &out.rows[i] {
                let mirror = out.entry(j, i);
                if (mirror - z.conj()).norm() != 0.0 {
                    return Err(Error::NotHermitian {
                        residual: (mirror - z.conj()).norm(),
                    });
                }
            }
        }
        out.refresh_stats();
        Ok(out)
    }

    /// Symmetric matrix from upper-triangle triplets `(i, j, value)`, `i <= j`.
    pub fn from_upper_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); dim];
        for (i, j, z) in triplets {
            if i > j || j >= dim {
                return Err(Error::InvalidInput(format!(
                    "triplet ({i}, {j}) is not in the upper triangle of a {dim}x{dim} matrix"
                )));
            }
            if i == j && z.im != 0.0 {
                return Err(Error::NotHermitian { residual: z.im.abs() });
            }
            rows[i].push((j, z));
            if i != j {
                rows[j].push((i, z.conj()));
            }
        }
        Self::from_rows(rows)
    }

    /// Unweighted simple graph.
    pub fn from_edges(dim: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_upper_triplets(
            dim,
            edges.into_iter().map(|(a, b)| (a.min(b), a.max(b), c64(1.0, 0.0))),
        )
    }

    pub fn from_dense(m: &CMatrix) -> Result<Self> {
        Self::from_dense_with_threshold(m, 0.0, 1e-12)
    }

    /// Drops entries with `|z| <= threshold`; a threshold of 0 keeps every nonzero.
    pub fn from_dense_with_threshold(m: &CMatrix, threshold: f64, tol_herm: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let residual = hermiticity_residual(m);
        if residual > tol_herm {
            return Err(Error::NotHermitian { residual });
        }
        let n = m.nrows();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let z = m[(i, j)];
                        (z.norm() > threshold && (z.re != 0.0 || z.im != 0.0)).then_some((j, z))
                    })
                    .collect()
            })
            .collect();
        let mut out = Self {
            dim: n,
            rows,
            sparsity: 0,
            max_entry: 0.0,
            class: None,
        };
        out.refresh_stats();
        Ok(out)
    }

    fn refresh_stats(&mut self) {
        self.sparsity = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        self.max_entry = self
            .rows
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, (_, z)| acc.max(z.norm()));
        let entries = || self.rows.iter().flatten().map(|&(_, z)| z);
        self.class = [
            MatrixClass::ZeroOne,
            MatrixClass::SignedUnit,
            MatrixClass::WeightedReal,
        ]
        .into_iter()
        .find(|class| entries().all(|z| class.admits(z)));
    }

    /// Re-tags the matrix with a wider (or equal) class.
    pub fn with_class(mut self, class: MatrixClass) -> Result<Self> {
        if let Some(z) = self.rows.iter().flatten().map(|&(_, z)| z).find(|&z| !class.admits(z)) {
            return Err(Error::InvalidInput(format!("entry {z} is not admissible for class {class}")));
        }
        self.class = Some(class);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Maximum number of nonzeros in any row (`d`).
    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    /// `|A|_max`, the largest entry modulus.
    pub fn max_entry(&self) -> f64 {
        self.max_entry
    }

    pub fn class(&self) -> Option<MatrixClass> {
        self.class
    }

    pub fn is_real(&self) -> bool {
        self.class.is_some()
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(c64(0.0, 0.0))
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn to_dense_real(&self) -> Result<DMatrix<f64>> {
        if !self.is_real() {
            return Err(Error::NotRealSymmetric);
        }
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row {
                m[(i, j)] = z.re;
            }
        }
        Ok(m)
    }

    /// `y = A x` for a real vector (real matrices only; imaginary parts ignored).
    pub fn mul_real(&self, x: &[f64], y: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            y[i] = row.iter().map(|&(j, z)| z.re * x[j]).sum();
        }
    }

    /// Sparse text format: header `N d class`, then one `i j re im` line per
    /// upper-triangle nonzero. Complex matrices use class `complex`.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let class = self.class.map(MatrixClass::as_str).unwrap_or("complex");
        let mut s = format!("{} {} {}\n", self.dim, self.sparsity, class);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, z) in row.iter().filter(|&&(j, _)| j >= i) {
                writeln!(s, "{i} {j} {} {}", z.re, z.im).expect("writing to a String");
            }
        }
        s
    }

    pub fn parse_text(text: &str, source: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(hline, format!("header must be `N d class`, got {header:?}")));
        }
        let dim: usize = fields[0]
            .parse()
            .map_err(|_| err(hline, format!("bad dimension {:?}", fields[0])))?;
        let declared_d: usize = fields[1]
            .parse()
            .map_err(|_| err(hline, format!("bad sparsity {:?}", fields[1])))?;
        let class = match fields[2] {
            "complex" => None,
            other => Some(other.parse::<MatrixClass>().map_err(|e| err(hline, e.to_string()))?),
        };
        let mut triplets = Vec::new();
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(err(ln, format!("expected `i j re im`, got {line:?}")));
            }
            let i: usize = f[0].parse().map_err(|_| err(ln, format!("bad row index {:?}", f[0])))?;
            let j: usize = f[1].parse().map_err(|_| err(ln, format!("bad column index {:?}", f[1])))?;
            let re: f64 = f[2].parse().map_err(|_| err(ln, format!("bad real part {:?}", f[2])))?;
            let im: f64 = f[3].parse().map_err(|_| err(ln, format!("bad imaginary part {:?}", f[3])))?;
            if i > j || j >= dim {
                return Err(err(ln, format!("({i}, {j}) is not an upper-triangle index for N = {dim}")));
            }
            let z = c64(re, im);
            if let Some(class) = class {
                if !class.admits(z) {
                    return Err(err(ln, format!("entry {z} is not admissible for class {class}")));
                }
            }
            triplets.push((i, j, z));
        }
        let m = Self::from_upper_triplets(dim, triplets).map_err(|e| err(hline, e.to_string()))?;
        if m.sparsity > declared_d {
            return Err(err(
                hline,
                format!("declared sparsity {declared_d} but a row has {} nonzeros", m.sparsity),
            ));
        }
        match class {
            Some(class) => m.with_class(class).map_err(|e| err(hline, e.to_string())),
            None => Ok(m),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_text(&text, &path.display().to_string())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
