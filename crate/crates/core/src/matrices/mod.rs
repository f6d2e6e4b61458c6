//! Measurement matrices: the sparse binary type, the dense baseline type and
//! their constructions.

mod construct;
mod gaussian;
pub mod mtx;
mod primes;

pub use construct::{
    construct_array_matrix, construct_devore_matrix, construct_euler_matrix, devore_degree_for,
};
pub use gaussian::construct_gaussian_matrix;
pub use mtx::{export_matrix, import_matrix, read_vector, write_vector};
pub use primes::{is_prime, next_prime_geq};

use crate::{Error, Result};

/// Sparse 0/1 matrix stored as sorted row-index lists, one per column.
///
/// Columns are the left nodes and rows the right nodes of the associated
/// bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    col_support: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    /// Builds a matrix from column supports. Each list is sorted here;
    /// duplicates and out-of-range indices are rejected.
    pub fn from_columns(rows: usize, mut col_support: Vec<Vec<usize>>) -> Result<Self> {
        if rows == 0 || col_support.is_empty() {
            return Err(Error::InvalidMatrix(format!(
                "empty matrix ({rows} x {})",
                col_support.len()
            )));
        }
        for (j, col) in col_support.iter_mut().enumerate() {
            col.sort_unstable();
            if let Some(w) = col.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate entry ({}, {j})",
                    w[0]
                )));
            }
            if let Some(&r) = col.last() {
                if r >= rows {
                    return Err(Error::InvalidMatrix(format!(
                        "row index {r} out of range in column {j} (rows = {rows})"
                    )));
                }
            }
        }
        Ok(BinaryMatrix {
            rows,
            cols: col_support.len(),
            col_support,
        })
    }

    /// Identity of order `n`.
    pub fn identity(n: usize) -> Self {
        BinaryMatrix {
            rows: n,
            cols: n,
            col_support: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted row indices of column `j`.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.col_support[j]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.col_support
    }

    pub fn nnz(&self) -> usize {
        self.col_support.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.col_support[j].binary_search(&i).is_ok()
    }

    /// Column indices of each row, sorted.
    pub fn row_supports(&self) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (j, col) in self.col_support.iter().enumerate() {
            for &i in col {
                rows[i].push(j);
            }
        }
        rows
    }

    /// The first `n` columns.
    pub fn truncate_columns(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.cols {
            return Err(Error::InvalidParameter(format!(
                "cannot keep {n} of {} columns",
                self.cols
            )));
        }
        Ok(BinaryMatrix {
            rows: self.rows,
            cols: n,
            col_support: self.col_support[..n].to_vec(),
        })
    }

    /// Returns the matrix with columns reordered so that new column `j` is old
    /// column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for {} columns",
                perm.len(),
                self.cols
            )));
        }
        let cols = perm.iter().map(|&p| self.col_support[p].clone()).collect();
        BinaryMatrix::from_columns(self.rows, cols)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut data = vec![0.0; self.rows * self.cols];
        for (j, col) in self.col_support.iter().enumerate() {
            for &i in col {
                data[i * self.cols + j] = 1.0;
            }
        }
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// `A x`, by additions only.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.apply(x, &mut out);
        out
    }

    /// `A^T y`, by additions only.
    pub fn rmatvec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.apply_transpose(y, &mut out);
        out
    }
}

/// Row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("empty matrix ({rows} x {cols})")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows} x {cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.apply(x, &mut out);
        out
    }

    pub fn rmatvec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.apply_transpose(y, &mut out);
        out
    }
}

/// Matrix family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    ArrayCode,
    DeVore,
    EulerSquare,
    Gaussian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ArrayCode => "array",
            Family::DeVore => "devore",
            Family::EulerSquare => "euler",
            Family::Gaussian => "gaussian",
        }
    }

    pub fn is_binary(self) -> bool {
        self != Family::Gaussian
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "array" | "array-code" | "arraycode" => Ok(Family::ArrayCode),
            "devore" => Ok(Family::DeVore),
            "euler" | "euler-square" => Ok(Family::EulerSquare),
            "gaussian" => Ok(Family::Gaussian),
            other => Err(Error::InvalidParameter(format!("unknown matrix family '{other}'"))),
        }
    }
}

/// Everything needed to build one matrix of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionParams {
    ArrayCode { q: usize, l: usize },
    DeVore { q: usize, r: usize },
    EulerSquare { q: usize, l: usize },
    Gaussian { m: usize, n: usize, seed: u64 },
}

impl ConstructionParams {
    pub fn family(&self) -> Family {
        match self {
            ConstructionParams::ArrayCode { .. } => Family::ArrayCode,
            ConstructionParams::DeVore { .. } => Family::DeVore,
            ConstructionParams::EulerSquare { .. } => Family::EulerSquare,
            ConstructionParams::Gaussian { .. } => Family::Gaussian,
        }
    }

    pub fn construct(&self) -> Result<Matrix> {
        Ok(match *self {
            ConstructionParams::ArrayCode { q, l } => construct_array_matrix(q, l)?.into(),
            ConstructionParams::DeVore { q, r } => construct_devore_matrix(q, r)?.into(),
            ConstructionParams::EulerSquare { q, l } => construct_euler_matrix(q, l)?.into(),
            ConstructionParams::Gaussian { m, n, seed } => construct_gaussian_matrix(m, n, seed)?.into(),
        })
    }
}

/// Either kind of measurement matrix, as read from a Matrix Market file.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Binary(BinaryMatrix),
    Dense(DenseMatrix),
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Binary(m) => m.rows(),
            Matrix::Dense(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Binary(m) => m.cols(),
            Matrix::Dense(m) => m.cols(),
        }
    }

    /// Keeps the first `n` columns.
    pub fn truncate_columns(&self, n: usize) -> Result<Matrix> {
        match self {
            Matrix::Binary(m) => m.truncate_columns(n).map(Matrix::Binary),
            Matrix::Dense(m) => {
                if n == 0 || n > m.cols() {
                    return Err(Error::InvalidParameter(format!("cannot keep {n} of {} columns", m.cols())));
                }
                let data = (0..m.rows()).flat_map(|i| m.row(i)[..n].to_vec()).collect();
                DenseMatrix::new(m.rows(), n, data).map(Matrix::Dense)
            }
        }
    }

    pub fn as_operator(&self) -> &dyn LinearOperator {
        match self {
            Matrix::Binary(m) => m,
            Matrix::Dense(m) => m,
        }
    }
}

impl From<BinaryMatrix> for Matrix {
    fn from(m: BinaryMatrix) -> Self {
        Matrix::Binary(m)
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(m: DenseMatrix) -> Self {
        Matrix::Dense(m)
    }
}

/// The matrix-vector products and Gram matrix the solvers need.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// `out = A x`
    fn apply(&self, x: &[f64], out: &mut [f64]);
    /// `out = A^T y`
    fn apply_transpose(&self, y: &[f64], out: &mut [f64]);
    /// Dense row-major `A A^T`.
    fn gram_rows(&self) -> Vec<f64>;
    /// Dense row-major `A^T A`.
    fn gram_cols(&self) -> Vec<f64>;
    /// Entry `(i, j)`.
    fn entry(&self, i: usize, j: usize) -> f64;
}

impl LinearOperator for BinaryMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (col, &xj) in self.col_support.iter().zip(x) {
            if xj != 0.0 {
                for &i in col {
                    out[i] += xj;
                }
            }
        }
    }

    fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        for (o, col) in out.iter_mut().zip(&self.col_support) {
            *o = col.iter().map(|&i| y[i]).sum();
        }
    }

    fn gram_rows(&self) -> Vec<f64> {
        let m = self.rows;
        let mut g = vec![0.0; m * m];
        for col in &self.col_support {
            for &a in col {
                for &b in col {
                    g[a * m + b] += 1.0;
                }
            }
        }
        g
    }

    fn gram_cols(&self) -> Vec<f64> {
        let n = self.cols;
        let rows = self.row_supports();
        let mut g = vec![0.0; n * n];
        for row in &rows {
            for &a in row {
                for &b in row {
                    g[a * n + b] += 1.0;
                }
            }
        }
        g
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        if self.get(i, j) {
            1.0
        } else {
            0.0
        }
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (row, &yi) in self.data.chunks_exact(self.cols).zip(y) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
    }

    fn gram_rows(&self) -> Vec<f64> {
        let m = self.rows;
        let mut g = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let v: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        g
    }

    fn gram_cols(&self) -> Vec<f64> {
        let n = self.cols;
        let mut g = vec![0.0; n * n];
        for row in self.data.chunks_exact(n) {
            for a in 0..n {
                let ra = row[a];
                if ra == 0.0 {
                    continue;
                }
                for b in 0..n {
                    g[a * n + b] += ra * row[b];
                }
            }
        }
        g
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
}
