use super::{generate_sparse_signal, SignalModel};
use crate::bounds::{ceil_sqrt, gaussian_sample_bound};
use crate::matrices::{
    construct_array_matrix, construct_devore_matrix, construct_euler_matrix, construct_gaussian_matrix,
    devore_degree_for, next_prime_geq, Family, Matrix,
};
use crate::rng::mix_seed;
use crate::solver::{evaluate_recovery, Decoder, SolverConfig};
use crate::{Error, Result};

pub const TIMING_HEADER: &str = "n,k,family,m,trials,successes,mean_seconds,gaussian_over_family";

#[derive(Clone, Debug, PartialEq)]
pub struct TimingRow {
    pub n: usize,
    pub k: usize,
    pub family: Family,
    pub m: usize,
    pub trials: usize,
    pub successes: usize,
    /// Mean wall-clock of one solve, excluding matrix construction and the
    /// one-off factorization.
    pub mean_seconds: f64,
    /// Gaussian mean time divided by this family's.
    pub gaussian_over_family: Option<f64>,
}

impl TimingRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.family,
            self.m,
            self.trials,
            self.successes,
            self.mean_seconds,
            self.gaussian_over_family.map_or("NA".to_string(), |r| r.to_string())
        )
    }
}

/// The family's matrix certified for order `k` at length `n`.
///
/// Array and Euler: `q = next prime >= ceil(sqrt(n))`, left degree `k+1`.
/// DeVore: `q = next prime > 2k`. Gaussian: `m` from the sample bound with
/// RIP order `ceil(3k/2)`, `delta = 0.5`, `xi = 1e-9`, falling back to the
/// array `m` when that bound reaches `n`. Binary matrices keep their first
/// `n` columns.
pub fn certified_matrix(family: Family, n: usize, k: usize, seed: u64) -> Result<Matrix> {
    if k == 0 || n < 4 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and n >= 4, got k={k}, n={n}")));
    }
    let q_array = next_prime_geq(ceil_sqrt(n as u64)) as usize;
    let m = match family {
        Family::ArrayCode => return Ok(construct_array_matrix(q_array, k + 1)?.truncate_columns(n)?.into()),
        Family::EulerSquare => return Ok(construct_euler_matrix(q_array, k + 1)?.truncate_columns(n)?.into()),
        Family::DeVore => {
            let q = next_prime_geq(2 * k as u64 + 1) as usize;
            let full = construct_devore_matrix(q, devore_degree_for(q, n))?;
            return Ok(full.truncate_columns(n)?.into());
        }
        Family::Gaussian => {
            let m_g = gaussian_sample_bound(n, ((3 * k).div_ceil(2)).min(n), 0.5, 1e-9)? as usize;
            if m_g < n {
                m_g
            } else {
                (k + 1) * q_array
            }
        }
    };
    Ok(construct_gaussian_matrix(m, n, seed)?.into())
}

/// Mean solve time per family on the same seeded signed `k`-sparse signals.
pub fn timing_comparison(n: usize, k: usize, families: &[Family], trials: usize, seed: u64) -> Result<Vec<TimingRow>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let cfg = SolverConfig::default();
    let mut rows = Vec::new();
    for &family in families {
        let matrix = certified_matrix(family, n, k, seed)?;
        let decoder = Decoder::new(matrix.as_operator(), &cfg)?;
        let mut y = vec![0.0; matrix.rows()];
        let mut seconds = 0.0;
        let mut successes = 0;
        for trial in 0..trials {
            let x = generate_sparse_signal(n, k, SignalModel::Signed, mix_seed(&[seed, n as u64, k as u64, trial as u64]))?;
            matrix.as_operator().apply(&x, &mut y);
            let r = decoder.solve(&y, 0.0, &cfg)?;
            seconds += r.wall_time;
            if evaluate_recovery(&r.x_hat, &x, cfg.success_threshold)?.1 {
                successes += 1;
            }
        }
        rows.push(TimingRow {
            n,
            k,
            family,
            m: matrix.rows(),
            trials,
            successes,
            mean_seconds: seconds / trials as f64,
            gaussian_over_family: None,
        });
    }
    if let Some(g) = rows.iter().find(|r| r.family == Family::Gaussian).map(|r| r.mean_seconds) {
        for r in &mut rows {
            r.gaussian_over_family = Some(g / r.mean_seconds.max(f64::MIN_POSITIVE));
        }
    }
    Ok(rows)
}
