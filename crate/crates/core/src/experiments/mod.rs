//! Phase-transition experiments and timing comparisons.
//!
//! A sweep fixes `n` and a matrix family, and for each permissible `m` runs
//! seeded basis-pursuit trials over a grid of sparsity levels `k`. Results go
//! to `cells.csv`, `summary.csv` and `widths.csv`.

mod config;
mod summary;
mod sweep;
mod timing;

pub use config::{KGrid, PhaseConfig};
pub use summary::{crossing, isotonic_nonincreasing, summarize_phase, PhaseSummary, ThetaSummary};
pub use sweep::{load_cells, run_phase_sweep, PhaseCell, PhaseGrid, CELLS_HEADER, SUMMARY_HEADER, WIDTHS_HEADER};
pub use timing::{certified_matrix, timing_comparison, TimingRow, TIMING_HEADER};

use crate::matrices::{
    construct_array_matrix, construct_devore_matrix, construct_euler_matrix, construct_gaussian_matrix,
    devore_degree_for, is_prime, Family, Matrix,
};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Distribution of the nonzero entries of a test signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalModel {
    /// Entries `+1` or `-1` with equal probability.
    Signed,
    /// Entries uniform on `[-1, 1]`, never exactly zero.
    BoundedUniform,
}

impl std::str::FromStr for SignalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "signed" => Ok(SignalModel::Signed),
            "bounded" | "uniform" | "bounded-uniform" => Ok(SignalModel::BoundedUniform),
            other => Err(Error::InvalidParameter(format!("unknown signal model '{other}'"))),
        }
    }
}

impl std::fmt::Display for SignalModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignalModel::Signed => "signed",
            SignalModel::BoundedUniform => "bounded",
        })
    }
}

/// `k`-sparse vector whose support is the first `k` entries of a seeded
/// Fisher-Yates shuffle of `0..n`.
pub fn generate_sparse_signal(n: usize, k: usize, model: SignalModel, seed: u64) -> Result<Vec<f64>> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below((n - i) as u64) as usize;
        idx.swap(i, j);
    }
    let mut x = vec![0.0; n];
    for &i in &idx[..k] {
        x[i] = match model {
            SignalModel::Signed => {
                if rng.next_u64() >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            SignalModel::BoundedUniform => loop {
                let v = 2.0 * rng.next_f64() - 1.0;
                if v != 0.0 {
                    break v;
                }
            },
        };
    }
    Ok(x)
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = crate::bounds::ceil_sqrt(n as u64) as usize;
    (r * r == n).then_some(r)
}

/// Smallest undersampling ratio `m/n` kept for DeVore sweeps.
pub const DEVORE_MIN_THETA: f64 = 0.1;

/// Measurement counts a family supports at length `n`.
///
/// Array and Euler matrices need `n = q^2` with `q` prime and give
/// `m = l q` for `2 <= l <= q-1`. DeVore matrices give `m = q^2` for prime
/// `q` with `q^2 < n` and `m/n >= 0.1`. Gaussian matrices allow every
/// `1 <= m < n`.
pub fn permissible_m(family: Family, n: usize) -> Result<Vec<usize>> {
    match family {
        Family::ArrayCode | Family::EulerSquare => {
            let q = exact_sqrt(n)
                .filter(|&q| is_prime(q as u64))
                .ok_or_else(|| Error::InvalidParameter(format!("{family} sweeps need n = q^2 with q prime, got {n}")))?;
            Ok((2..q).map(|l| l * q).collect())
        }
        Family::DeVore => Ok((2..)
            .take_while(|q| q * q < n)
            .filter(|&q| is_prime(q as u64) && (q * q) as f64 >= DEVORE_MIN_THETA * n as f64)
            .map(|q| q * q)
            .collect()),
        Family::Gaussian => Ok((1..n).collect()),
    }
}

/// The family's `m x n` matrix used in sweeps.
///
/// DeVore matrices use the smallest degree with at least `n` columns and keep
/// the first `n`.
pub fn matrix_for(family: Family, n: usize, m: usize, seed: u64) -> Result<Matrix> {
    let not_permissible = || Error::InvalidParameter(format!("m = {m} is not permissible for {family} at n = {n}"));
    match family {
        Family::ArrayCode | Family::EulerSquare => {
            let q = exact_sqrt(n).ok_or_else(not_permissible)?;
            if m % q != 0 {
                return Err(not_permissible());
            }
            let l = m / q;
            let b = if family == Family::ArrayCode {
                construct_array_matrix(q, l)?
            } else {
                construct_euler_matrix(q, l)?
            };
            Ok(b.into())
        }
        Family::DeVore => {
            let q = exact_sqrt(m).ok_or_else(not_permissible)?;
            let full = construct_devore_matrix(q, devore_degree_for(q, n))?;
            Ok(full.truncate_columns(n)?.into())
        }
        Family::Gaussian => {
            if m == 0 || m > n {
                return Err(not_permissible());
            }
            Ok(construct_gaussian_matrix(m, n, seed)?.into())
        }
    }
}
