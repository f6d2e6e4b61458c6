//! Exact combinatorial and spectral analysis of measurement matrices.

mod girth;
mod nullspace;
mod spectral;

pub use girth::{girth, Girth};
pub use nullspace::{null_space_basis, verify_nullspace_bound, NullspaceReport};
pub use spectral::{spectral, Spectrum, DEFAULT_ZERO_THRESHOLD};

use crate::matrices::BinaryMatrix;
use crate::{Error, Result};

/// Column and row weights of a binary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_regular: bool,
    pub right_regular: bool,
}

impl DegreeProfile {
    pub fn min_left(&self) -> usize {
        self.left.iter().copied().min().unwrap_or(0)
    }

    pub fn max_left(&self) -> usize {
        self.left.iter().copied().max().unwrap_or(0)
    }

    pub fn min_right(&self) -> usize {
        self.right.iter().copied().min().unwrap_or(0)
    }

    pub fn max_right(&self) -> usize {
        self.right.iter().copied().max().unwrap_or(0)
    }

    /// Edges per column.
    pub fn avg_left(&self) -> f64 {
        self.left.iter().sum::<usize>() as f64 / self.left.len() as f64
    }

    /// Edges per row.
    pub fn avg_right(&self) -> f64 {
        self.right.iter().sum::<usize>() as f64 / self.right.len() as f64
    }

    /// `d_L` when the matrix is left-regular.
    pub fn left_degree(&self) -> Option<usize> {
        self.left_regular.then(|| self.left[0])
    }
}

pub fn degree_profile(m: &BinaryMatrix) -> DegreeProfile {
    let left: Vec<usize> = m.columns().iter().map(Vec::len).collect();
    let mut right = vec![0; m.rows()];
    for col in m.columns() {
        for &i in col {
            right[i] += 1;
        }
    }
    let regular = |v: &[usize]| v.iter().all(|&d| d == v[0]);
    DegreeProfile {
        left_regular: regular(&left),
        right_regular: regular(&right),
        left,
        right,
    }
}

/// Largest column overlap `lambda` and coherence `mu` of the column-normalized
/// matrix, from one pass over column pairs that share a row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnOverlap {
    pub lambda: usize,
    pub mu: f64,
}

pub fn column_overlap(m: &BinaryMatrix) -> Result<ColumnOverlap> {
    let n = m.cols();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "column overlap needs at least two columns".into(),
        ));
    }
    let rows = m.row_supports();
    let weights: Vec<f64> = m.columns().iter().map(|c| c.len() as f64).collect();
    let mut counts = vec![0usize; n];
    let mut seen = Vec::new();
    let mut lambda = 0;
    let mut mu: f64 = 0.0;
    for a in 0..n {
        for &r in m.column(a) {
            for &b in &rows[r] {
                if b > a {
                    if counts[b] == 0 {
                        seen.push(b);
                    }
                    counts[b] += 1;
                }
            }
        }
        for &b in &seen {
            lambda = lambda.max(counts[b]);
            mu = mu.max(counts[b] as f64 / (weights[a] * weights[b]).sqrt());
            counts[b] = 0;
        }
        seen.clear();
    }
    Ok(ColumnOverlap { lambda, mu })
}

/// Maximum inner product between two distinct columns.
pub fn max_column_inner_product(m: &BinaryMatrix) -> Result<usize> {
    column_overlap(m).map(|o| o.lambda)
}

/// Coherence of the column-normalized matrix.
pub fn coherence(m: &BinaryMatrix) -> Result<f64> {
    column_overlap(m).map(|o| o.mu)
}

/// Everything the certificates need about one binary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAnalysis {
    pub rows: usize,
    pub cols: usize,
    pub girth: Girth,
    pub min_left_degree: usize,
    pub max_left_degree: usize,
    pub avg_left_degree: f64,
    pub min_right_degree: usize,
    pub max_right_degree: usize,
    pub avg_right_degree: f64,
    pub left_regular: bool,
    pub right_regular: bool,
    pub lambda: usize,
    pub mu: f64,
    pub rank: usize,
    pub sigma_min: f64,
}

impl MatrixAnalysis {
    pub fn left_degree(&self) -> Option<usize> {
        self.left_regular.then_some(self.min_left_degree)
    }

    pub const CSV_HEADER: &'static str = "rows,cols,girth,min_dl,max_dl,avg_dl,min_dr,max_dr,avg_dr,left_regular,right_regular,lambda,mu,rank,sigma_min";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.rows,
            self.cols,
            self.girth,
            self.min_left_degree,
            self.max_left_degree,
            self.avg_left_degree,
            self.min_right_degree,
            self.max_right_degree,
            self.avg_right_degree,
            self.left_regular,
            self.right_regular,
            self.lambda,
            self.mu,
            self.rank,
            self.sigma_min
        )
    }
}

/// Full analysis: girth, degrees, overlap, coherence and spectrum.
pub fn analyze(m: &BinaryMatrix) -> Result<MatrixAnalysis> {
    let degrees = degree_profile(m);
    let overlap = column_overlap(m)?;
    let spectrum = spectral(m, DEFAULT_ZERO_THRESHOLD)?;
    Ok(MatrixAnalysis {
        rows: m.rows(),
        cols: m.cols(),
        girth: girth(m),
        min_left_degree: degrees.min_left(),
        max_left_degree: degrees.max_left(),
        avg_left_degree: degrees.avg_left(),
        min_right_degree: degrees.min_right(),
        max_right_degree: degrees.max_right(),
        avg_right_degree: degrees.avg_right(),
        left_regular: degrees.left_regular,
        right_regular: degrees.right_regular,
        lambda: overlap.lambda,
        mu: overlap.mu,
        rank: spectrum.rank,
        sigma_min: spectrum.sigma_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{construct_array_matrix, construct_devore_matrix};

    #[test]
    fn degree_profiles_of_constructions() {
        let h = degree_profile(&construct_array_matrix(7, 3).unwrap());
        assert!(h.left.iter().all(|&d| d == 3) && h.right.iter().all(|&d| d == 7));
        assert!(h.left_regular && h.right_regular);
        let d = degree_profile(&construct_devore_matrix(5, 2).unwrap());
        assert!(d.left.iter().all(|&x| x == 5) && d.right.iter().all(|&x| x == 25));
    }

    #[test]
    fn zero_column_breaks_regularity() {
        let h = construct_array_matrix(5, 2).unwrap();
        let mut cols = h.columns().to_vec();
        cols.push(Vec::new());
        let m = BinaryMatrix::from_columns(h.rows(), cols).unwrap();
        assert!(!degree_profile(&m).left_regular);
    }

    #[test]
    fn overlaps() {
        let dup = BinaryMatrix::from_columns(4, vec![vec![0, 1, 2], vec![0, 1, 2], vec![3]]).unwrap();
        assert_eq!(max_column_inner_product(&dup).unwrap(), 3);
        assert_eq!(max_column_inner_product(&construct_devore_matrix(5, 2).unwrap()).unwrap(), 2);
        let h = construct_array_matrix(7, 4).unwrap();
        let o = column_overlap(&h).unwrap();
        assert_eq!(o.lambda, 1);
        assert!((o.mu - 0.25).abs() < 1e-15);
        assert!(column_overlap(&BinaryMatrix::identity(1)).is_err());
    }

    #[test]
    fn full_analysis_of_small_array() {
        let a = analyze(&construct_array_matrix(5, 4).unwrap()).unwrap();
        assert_eq!(a.girth, Girth::Finite(6));
        assert_eq!(a.rank, 17);
        assert_eq!(a.left_degree(), Some(4));
        assert_eq!(a.lambda, 1);
        assert!(a.sigma_min > 0.0);
    }
}
