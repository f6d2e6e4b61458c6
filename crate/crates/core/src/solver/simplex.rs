use std::time::Instant;

use super::{RecoveryInstance, RecoveryResult, Status};
use crate::linalg::norm1;
use crate::matrices::LinearOperator;
use crate::rng::SplitMix64;
use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-7;
const COST_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-11;
const DEGENERATE_LIMIT: usize = 20;
const REFACTOR_EVERY: usize = 50;
const SHIFT: f64 = 1e-7;
const SHIFT_SLACK: f64 = 1e-4;
const SHIFT_SEED: u64 = 0x5eed;

/// Solves `min 1^T (p + q)` subject to `A (p - q) = y`, `p, q >= 0` with a
/// dense two-phase simplex method. Bland's rule guards against cycling.
pub fn lp_oracle(instance: &RecoveryInstance) -> Result<RecoveryResult> {
    if instance.epsilon != 0.0 {
        return Err(Error::InvalidParameter("the LP oracle handles epsilon = 0 only".into()));
    }
    lp_oracle_op(instance.a, &instance.y)
}

pub fn lp_oracle_op(a: &dyn LinearOperator, y: &[f64]) -> Result<RecoveryResult> {
    let start = Instant::now();
    let (m, n) = (a.nrows(), a.ncols());
    if y.len() != m {
        return Err(Error::DimensionMismatch(format!("y has length {}, A has {m} rows", y.len())));
    }
    let mut t = Tableau::new(a, y);
    let cap = 50 * (m + 2 * n + 10);

    // Shift each structural lower bound to a tiny random negative value so
    // that no basic variable sits exactly at its bound; the true bounds are
    // restored before the solution is read.
    let scale = y.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut rng = SplitMix64::new(SHIFT_SEED);
    let shifts: Vec<f64> = (0..2 * n).map(|_| scale * SHIFT * (1.0 + rng.next_f64())).collect();
    t.shift_rhs(&shifts);
    t.refactor()?;

    // Phase one: drive the artificial variables to zero.
    let phase_one: Vec<f64> = (0..t.width).map(|j| if j >= 2 * n { 1.0 } else { 0.0 }).collect();
    t.set_costs(&phase_one);
    t.optimize(t.width, cap)?;
    let infeasibility: f64 = (0..t.rows).filter(|&i| t.basis[i] >= 2 * n).map(|i| t.rhs(i)).sum();
    if infeasibility > 1e-9 * norm1(y).max(1.0) + SHIFT_SLACK * scale {
        return Err(Error::Infeasible);
    }
    t.evict_artificials(2 * n);
    t.refactor()?;

    let phase_two: Vec<f64> = (0..t.width).map(|j| if j < 2 * n { 1.0 } else { 0.0 }).collect();
    t.set_costs(&phase_two);
    t.optimize(2 * n, cap)?;

    t.shift_rhs(&vec![0.0; 2 * n]);
    t.refactor()?;
    t.dual_cleanup(2 * n, cap)?;

    let mut x = vec![0.0; n];
    for i in 0..t.rows {
        let j = t.basis[i];
        let v = t.rhs(i).max(0.0);
        if j < n {
            x[j] += v;
        } else if j < 2 * n {
            x[j - n] -= v;
        }
    }
    let mut ax = vec![0.0; m];
    a.apply(&x, &mut ax);
    let residual = ax.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let objective = norm1(&x);
    Ok(RecoveryResult {
        l1_objective: objective,
        x_hat: x,
        residual_norm: residual,
        iterations: t.pivots,
        status: Status::Converged,
        wall_time: start.elapsed().as_secs_f64(),
        lower_bound: Some(objective),
    })
}

/// Row-major tableau with one reduced-cost row.
struct Tableau {
    rows: usize,
    /// Structural plus artificial columns; the right-hand side is stored after them.
    width: usize,
    data: Vec<f64>,
    /// The initial tableau, kept for refactorization.
    original: Vec<f64>,
    /// Right-hand side before any bound shift.
    base_rhs: Vec<f64>,
    basis: Vec<usize>,
    since_refactor: usize,
    costs: Vec<f64>,
    reduced: Vec<f64>,
    pivots: usize,
}

impl Tableau {
    fn new(a: &dyn LinearOperator, y: &[f64]) -> Self {
        let (m, n) = (a.nrows(), a.ncols());
        let width = 2 * n + m;
        let stride = width + 1;
        let mut data = vec![0.0; m * stride];
        for i in 0..m {
            let sign = if y[i] < 0.0 { -1.0 } else { 1.0 };
            let row = &mut data[i * stride..(i + 1) * stride];
            for j in 0..n {
                let v = a.entry(i, j) * sign;
                row[j] = v;
                row[n + j] = -v;
            }
            row[2 * n + i] = 1.0;
            row[width] = y[i] * sign;
        }
        Tableau {
            rows: m,
            width,
            original: data.clone(),
            base_rhs: (0..m).map(|i| data[i * (width + 1) + width]).collect(),
            data,
            since_refactor: 0,
            basis: (0..m).map(|i| 2 * n + i).collect(),
            costs: vec![0.0; width],
            reduced: vec![0.0; width],
            pivots: 0,
        }
    }

    fn stride(&self) -> usize {
        self.width + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.stride() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn set_costs(&mut self, costs: &[f64]) {
        self.costs.copy_from_slice(costs);
        self.reduced.copy_from_slice(costs);
        for i in 0..self.rows {
            let cb = self.costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.width {
                    self.reduced[j] -= cb * self.at(i, j);
                }
            }
        }
    }

    /// Runs simplex pivots with entering columns restricted to `0..allowed`.
    ///
    /// Pricing picks the most negative reduced cost; after a run of
    /// degenerate pivots it switches to Bland's rule, which cannot cycle,
    /// until the objective moves again.
    fn optimize(&mut self, allowed: usize, cap: usize) -> Result<()> {
        let mut degenerate_run = 0;
        // Columns whose improving direction is below pivot precision.
        let mut blocked = vec![false; allowed];
        loop {
            let bland = degenerate_run >= DEGENERATE_LIMIT;
            let col = if bland {
                (0..allowed).find(|&j| !blocked[j] && self.reduced[j] < -COST_TOL)
            } else {
                (0..allowed)
                    .filter(|&j| !blocked[j] && self.reduced[j] < -COST_TOL)
                    .min_by(|&a, &b| self.reduced[a].total_cmp(&self.reduced[b]))
            };
            let Some(col) = col else {
                if self.since_refactor == 0 {
                    return Ok(());
                }
                self.refactor()?;
                continue;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, col);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                            let better = if tie {
                                // Bland breaks ties by basic index; otherwise prefer the larger pivot.
                                if bland {
                                    self.basis[i] < self.basis[r]
                                } else {
                                    a > self.at(r, col)
                                }
                            } else {
                                ratio < best
                            };
                            if better {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            // Both objectives are bounded below, so a column without a ratio
            // only has a round-off reduced cost.
            let Some((row, ratio)) = leave else {
                if self.since_refactor == 0 {
                    blocked[col] = true;
                } else {
                    self.refactor()?;
                }
                continue;
            };
            blocked.iter_mut().for_each(|b| *b = false);
            degenerate_run = if ratio == 0.0 { degenerate_run + 1 } else { 0 };
            self.pivot(row, col);
            if self.pivots > cap {
                return Err(Error::CyclingGuardExceeded(self.pivots));
            }
            if self.since_refactor >= REFACTOR_EVERY.max(self.rows) {
                self.refactor()?;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let stride = self.stride();
        let p = self.at(row, col);
        for v in &mut self.data[row * stride..(row + 1) * stride] {
            *v /= p;
        }
        let pivot_row = self.data[row * stride..(row + 1) * stride].to_vec();
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.at(i, col);
            if f != 0.0 {
                for (v, pv) in self.data[i * stride..(i + 1) * stride].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        let f = self.reduced[col];
        if f != 0.0 {
            for (r, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                *r -= f * pv;
            }
        }
        // Round-off must not push a basic value below zero.
        for i in 0..self.rows {
            let v = &mut self.data[i * stride + self.width];
            if v.abs() < ZERO_TOL {
                *v = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
        self.since_refactor += 1;
    }

    /// Sets the original right-hand side to `b + sum_j shift_j a_j` over the
    /// structural columns, i.e. lower bounds of `-shift_j`. The tableau is
    /// stale until the next refactor.
    fn shift_rhs(&mut self, shifts: &[f64]) {
        let stride = self.stride();
        for i in 0..self.rows {
            let row = &self.original[i * stride..(i + 1) * stride];
            let extra: f64 = shifts.iter().zip(row).map(|(s, a)| s * a).sum();
            self.original[i * stride + self.width] = self.base_rhs[i] + extra;
        }
    }

    /// Dual simplex pivots on rows with negative basic values. The basis is
    /// dual feasible on entry, so this restores primal feasibility at the
    /// same optimal cost.
    fn dual_cleanup(&mut self, allowed: usize, cap: usize) -> Result<()> {
        let tol = 1e-9 * self.base_rhs.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        loop {
            let row = (0..self.rows)
                .filter(|&i| self.rhs(i) < -tol)
                .min_by(|&a, &b| self.rhs(a).total_cmp(&self.rhs(b)));
            let Some(row) = row else {
                return Ok(());
            };
            let col = (0..allowed)
                .filter(|&j| self.at(row, j) < -PIVOT_TOL)
                .min_by(|&a, &b| {
                    let ra = self.reduced[a].max(0.0) / -self.at(row, a);
                    let rb = self.reduced[b].max(0.0) / -self.at(row, b);
                    ra.total_cmp(&rb)
                });
            let Some(col) = col else {
                return Err(Error::Infeasible);
            };
            self.pivot(row, col);
            if self.pivots > cap {
                return Err(Error::CyclingGuardExceeded(self.pivots));
            }
        }
    }

    /// Recomputes the tableau as `B^{-1}` times the original one, where `B`
    /// holds the original basic columns, discarding accumulated round-off.
    fn refactor(&mut self) -> Result<()> {
        let (r, stride) = (self.rows, self.stride());
        let mut b = vec![0.0; r * r];
        for i in 0..r {
            for (k, &j) in self.basis.iter().enumerate() {
                b[i * r + k] = self.original[i * stride + j];
            }
        }
        let mut rhs = self.original.clone();
        // Gaussian elimination with partial pivoting on [B | original].
        for c in 0..r {
            let p = (c..r)
                .max_by(|&x, &y| b[x * r + c].abs().total_cmp(&b[y * r + c].abs()))
                .unwrap_or(c);
            if b[p * r + c].abs() < 1e-12 {
                return Err(Error::InvalidMatrix("simplex basis became singular".into()));
            }
            if p != c {
                for k in 0..r {
                    b.swap(c * r + k, p * r + k);
                }
                for k in 0..stride {
                    rhs.swap(c * stride + k, p * stride + k);
                }
            }
            let d = b[c * r + c];
            for i in c + 1..r {
                let f = b[i * r + c] / d;
                if f != 0.0 {
                    for k in c..r {
                        b[i * r + k] -= f * b[c * r + k];
                    }
                    for k in 0..stride {
                        rhs[i * stride + k] -= f * rhs[c * stride + k];
                    }
                }
            }
        }
        for c in (0..r).rev() {
            let d = b[c * r + c];
            for k in 0..stride {
                rhs[c * stride + k] /= d;
            }
            for i in 0..c {
                let f = b[i * r + c];
                if f != 0.0 {
                    for k in 0..stride {
                        rhs[i * stride + k] -= f * rhs[c * stride + k];
                    }
                }
            }
        }
        // Row k of the solution belongs to the k-th basic variable.
        for i in 0..r {
            let v = &mut rhs[i * stride + self.width];
            if *v < 0.0 && *v > -1e-9 {
                *v = 0.0;
            }
        }
        self.data = rhs;
        let costs = self.costs.clone();
        self.set_costs(&costs);
        self.since_refactor = 0;
        Ok(())
    }

    /// Pivots zero-level artificials out of the basis. An artificial whose
    /// row has no structural entry marks a redundant constraint; it stays
    /// basic at zero and its row is cleared so it never leaves.
    fn evict_artificials(&mut self, first_artificial: usize) {
        let stride = self.stride();
        for i in 0..self.rows {
            if self.basis[i] >= first_artificial {
                let best = (0..first_artificial)
                    .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
                match best {
                    Some(j) if self.at(i, j).abs() > PIVOT_TOL => self.pivot(i, j),
                    _ => {
                        for v in &mut self.data[i * stride..i * stride + first_artificial] {
                            *v = 0.0;
                        }
                        self.data[i * stride + self.width] = 0.0;
                    }
                }
            }
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{construct_array_matrix, BinaryMatrix, DenseMatrix};

    #[test]
    fn single_column_is_recovered() {
        let h = construct_array_matrix(5, 4).unwrap();
        let mut e = vec![0.0; 25];
        e[7] = 1.0;
        let r = lp_oracle_op(&h, &h.matvec(&e)).unwrap();
        assert!((r.l1_objective - 1.0).abs() < 1e-9);
        assert!(r.x_hat.iter().zip(&e).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn zero_right_hand_side() {
        let h = construct_array_matrix(3, 2).unwrap();
        assert_eq!(lp_oracle_op(&h, &[0.0; 6]).unwrap().l1_objective, 0.0);
    }

    #[test]
    fn negative_measurements_and_redundant_rows() {
        // Rows 0 and 1 are equal, so one is dropped after phase one.
        let m = BinaryMatrix::from_columns(3, vec![vec![0, 1], vec![0, 1, 2], vec![2]]).unwrap();
        let x = [-2.0, 0.0, 0.5];
        let r = lp_oracle_op(&m, &m.matvec(&x)).unwrap();
        assert!((r.l1_objective - 2.5).abs() < 1e-9, "{r:?}");
        assert!(r.residual_norm < 1e-9);
    }

    #[test]
    fn infeasible_system() {
        let m = BinaryMatrix::from_columns(2, vec![vec![0, 1]]).unwrap();
        assert!(matches!(lp_oracle_op(&m, &[1.0, 2.0]), Err(Error::Infeasible)));
    }

    #[test]
    fn small_dense_problem() {
        // min |x1| + |x2| + |x3| s.t. x1 + x2 = 1, x2 + x3 = 1 has optimum x2 = 1.
        let a = DenseMatrix::new(2, 3, vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let r = lp_oracle_op(&a, &[1.0, 1.0]).unwrap();
        assert!((r.l1_objective - 1.0).abs() < 1e-12);
        assert!((r.x_hat[1] - 1.0).abs() < 1e-12);
    }
}
