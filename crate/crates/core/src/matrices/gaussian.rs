use super::DenseMatrix;
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// `m x n` matrix of i.i.d. `N(0, 1/m)` entries drawn by Box-Muller from the
/// splitmix64 stream keyed by `seed`. Entries are filled row-major.
pub fn construct_gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian matrix needs m, n >= 1 (got {m} x {n})"
        )));
    }
    let mut data = vec![0.0; m * n];
    SplitMix64::new(seed).fill_normal(&mut data);
    let scale = 1.0 / (m as f64).sqrt();
    data.iter_mut().for_each(|v| *v *= scale);
    DenseMatrix::new(m, n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = construct_gaussian_matrix(4, 4, 11).unwrap();
        let b = construct_gaussian_matrix(4, 4, 11).unwrap();
        let c = construct_gaussian_matrix(4, 4, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sample_mean_is_near_zero() {
        let (m, n) = (200, 400);
        let a = construct_gaussian_matrix(m, n, 3).unwrap();
        let mean = a.data().iter().sum::<f64>() / (m * n) as f64;
        // Each entry has standard deviation 1/sqrt(m).
        let std_err = 1.0 / ((m * n * m) as f64).sqrt();
        assert!(mean.abs() < 3.0 * std_err, "mean {mean}, se {std_err}");
    }

    #[test]
    fn column_norms_concentrate() {
        let a = construct_gaussian_matrix(100, 100, 5).unwrap();
        for j in 0..100 {
            let norm = (0..100).map(|i| a.get(i, j).powi(2)).sum::<f64>().sqrt();
            assert!((0.5..=1.5).contains(&norm), "column {j}: {norm}");
        }
    }
}
