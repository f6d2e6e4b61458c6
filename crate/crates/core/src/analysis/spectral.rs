use crate::linalg::SymmetricEigen;
use crate::matrices::LinearOperator;
use crate::{Error, Result};

/// Eigenvalues of the Gram matrix below this fraction of the largest one
/// count as zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub rank: usize,
    /// Smallest nonzero singular value.
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Gram eigenvalues, ascending.
    pub gram_eigenvalues: Vec<f64>,
}

/// Rank and extreme singular values from the smaller Gram matrix
/// (`A A^T` when `m <= n`, else `A^T A`).
pub fn spectral<A: LinearOperator + ?Sized>(a: &A, zero_threshold: f64) -> Result<Spectrum> {
    let (gram, order) = if a.nrows() <= a.ncols() {
        (a.gram_rows(), a.nrows())
    } else {
        (a.gram_cols(), a.ncols())
    };
    let eig = SymmetricEigen::new(&gram, order)?;
    let largest = eig.values.last().copied().unwrap_or(0.0);
    if largest <= 0.0 {
        return Err(Error::InvalidMatrix("zero matrix has no nonzero singular value".into()));
    }
    let cutoff = zero_threshold * largest;
    let nonzero: Vec<f64> = eig.values.iter().copied().filter(|&v| v > cutoff).collect();
    Ok(Spectrum {
        rank: nonzero.len(),
        sigma_min: nonzero[0].sqrt(),
        sigma_max: largest.sqrt(),
        gram_eigenvalues: eig.values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{construct_array_matrix, BinaryMatrix};

    #[test]
    fn identity_spectrum() {
        let s = spectral(&BinaryMatrix::identity(4), DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(s.rank, 4);
        assert!((s.sigma_min - 1.0).abs() < 1e-14);
    }

    #[test]
    fn array_rank_identity() {
        for (q, l) in [(5, 4), (7, 4), (7, 2), (11, 3)] {
            let h = construct_array_matrix(q, l).unwrap();
            let s = spectral(&h, DEFAULT_ZERO_THRESHOLD).unwrap();
            assert_eq!(s.rank, (q - 1) * l + 1, "H({q},{l})");
        }
    }

    #[test]
    fn tall_matrix_uses_column_gram() {
        let m = BinaryMatrix::from_columns(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let s = spectral(&m, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(s.rank, 2);
        // A^T A = [[2,1],[1,2]] has eigenvalues 1 and 3.
        assert!((s.sigma_min - 1.0).abs() < 1e-14);
        assert!((s.sigma_max - 3f64.sqrt()).abs() < 1e-14);
    }
}
