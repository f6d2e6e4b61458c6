use super::{column_overlap, degree_profile, girth, DEFAULT_ZERO_THRESHOLD};
use crate::bounds::c_prime;
use crate::linalg::{norm1, SymmetricEigen};
use crate::matrices::{BinaryMatrix, LinearOperator};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Slack allowed on the unit ratio for floating-point round-off.
pub const RATIO_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct NullspaceReport {
    pub samples: usize,
    pub nullity: usize,
    pub d_l: usize,
    pub lambda: usize,
    /// Largest `|v_i| * 2 d_L / (lambda * ||v||_1)` over all samples.
    pub max_ratio: f64,
    pub passed: bool,
    /// `C'` when the girth is at least six.
    pub c_prime: Option<u64>,
    /// Largest `|v_i| * C' / ||v||_1`.
    pub max_c_prime_ratio: Option<f64>,
    pub c_prime_passed: Option<bool>,
}

/// Orthonormal basis of the null space, one vector per entry.
pub fn null_space_basis(m: &BinaryMatrix) -> Result<Vec<Vec<f64>>> {
    let n = m.cols();
    let eig = SymmetricEigen::new(&m.gram_cols(), n)?;
    let largest = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = DEFAULT_ZERO_THRESHOLD * largest;
    Ok((0..n)
        .filter(|&k| eig.values[k] <= cutoff)
        .map(|k| eig.vector(k))
        .collect())
}

/// Samples random unit vectors of the null space and checks the componentwise
/// bound `|v_i| <= lambda ||v||_1 / (2 d_L)`, plus the `C'` bound at girth >= 6.
pub fn verify_nullspace_bound(
    m: &BinaryMatrix,
    num_samples: usize,
    seed: u64,
) -> Result<NullspaceReport> {
    let d_l = degree_profile(m).left_degree().ok_or(Error::NotLeftRegular)?;
    let lambda = column_overlap(m)?.lambda;
    let basis = null_space_basis(m)?;
    if basis.is_empty() {
        return Err(Error::TrivialNullSpace(m.cols()));
    }
    let c_prime = girth(m).finite().filter(|&g| g >= 6).map(|g| c_prime(g, d_l as u64)).transpose()?;

    let n = m.cols();
    let mut rng = SplitMix64::new(seed);
    let mut coeffs = vec![0.0; basis.len()];
    let mut v = vec![0.0; n];
    let mut max_ratio: f64 = 0.0;
    let mut max_cp: f64 = 0.0;
    for _ in 0..num_samples {
        rng.fill_normal(&mut coeffs);
        v.iter_mut().for_each(|x| *x = 0.0);
        for (c, b) in coeffs.iter().zip(&basis) {
            for (x, bi) in v.iter_mut().zip(b) {
                *x += c * bi;
            }
        }
        let l2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= l2);
        let l1 = norm1(&v);
        let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        max_ratio = max_ratio.max(peak * 2.0 * d_l as f64 / (lambda as f64 * l1));
        if let Some(cp) = c_prime {
            max_cp = max_cp.max(peak * cp as f64 / l1);
        }
    }
    Ok(NullspaceReport {
        samples: num_samples,
        nullity: basis.len(),
        d_l,
        lambda,
        max_ratio,
        passed: max_ratio <= 1.0 + RATIO_TOLERANCE,
        c_prime,
        max_c_prime_ratio: c_prime.map(|_| max_cp),
        c_prime_passed: c_prime.map(|_| max_cp <= 1.0 + RATIO_TOLERANCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::construct_array_matrix;

    #[test]
    fn basis_is_annihilated() {
        let h = construct_array_matrix(5, 3).unwrap();
        let basis = null_space_basis(&h).unwrap();
        assert_eq!(basis.len(), 25 - 13);
        for b in &basis {
            assert!(h.matvec(b).iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn array_samples_respect_bound() {
        let r = verify_nullspace_bound(&construct_array_matrix(5, 4).unwrap(), 100, 3).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.c_prime, Some(8));
        assert_eq!(r.c_prime_passed, Some(true));
    }

    #[test]
    fn full_rank_is_rejected() {
        assert!(matches!(
            verify_nullspace_bound(&BinaryMatrix::identity(3), 5, 0),
            Err(Error::TrivialNullSpace(3))
        ));
    }
}
