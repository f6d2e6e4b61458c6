//! Basis pursuit: `min ||z||_1` subject to `||y - A z||_2 <= epsilon`.
//!
//! [`Decoder`] is an operator-splitting (ADMM) solver that factors `A A^T`
//! once and reuses it across right-hand sides. [`lp_oracle`] solves the
//! `epsilon = 0` problem as a linear program with a dense simplex method and
//! serves as an independent cross-check.

mod admm;
mod simplex;

pub use admm::Decoder;
pub use simplex::{lp_oracle, lp_oracle_op};

use crate::linalg::norm2;
use crate::matrices::{BinaryMatrix, LinearOperator};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Relative tolerance on the primal residual `||x - z||`.
    pub primal_tol: f64,
    /// Relative tolerance on the dual residual and on the duality gap.
    pub dual_tol: f64,
    /// Allowed `||y - A x||_2` beyond `epsilon`, relative to `||y||_2`.
    pub feasibility_tol: f64,
    pub rho_init: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// Over-relaxation factor in `(0, 2)`.
    pub relaxation: f64,
    /// Ridge added to `A A^T`, relative to its mean diagonal.
    pub ridge: f64,
    /// Least-squares refit on the detected support.
    pub polish: bool,
    /// Relative l2 error below which a recovery counts as a success.
    pub success_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 10_000,
            primal_tol: 1e-8,
            dual_tol: 1e-8,
            feasibility_tol: 1e-6,
            rho_init: 1.0,
            rho_min: 1e-4,
            rho_max: 1e4,
            relaxation: 1.6,
            ridge: 1e-10,
            polish: true,
            success_threshold: 1e-4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.primal_tol,
            self.dual_tol,
            self.feasibility_tol,
            self.rho_init,
            self.rho_min,
            self.rho_max,
            self.ridge,
            self.success_threshold,
        ];
        if positive.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter("solver tolerances must be positive".into()));
        }
        if self.rho_min > self.rho_max || !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::InvalidParameter("inconsistent penalty settings".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

pub struct RecoveryInstance<'a> {
    pub a: &'a dyn LinearOperator,
    pub y: Vec<f64>,
    pub epsilon: f64,
    pub true_x: Option<Vec<f64>>,
}

impl<'a> RecoveryInstance<'a> {
    pub fn new(a: &'a dyn LinearOperator, y: Vec<f64>, epsilon: f64) -> Result<Self> {
        if y.len() != a.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "y has length {}, A has {} rows",
                y.len(),
                a.nrows()
            )));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        Ok(RecoveryInstance { a, y, epsilon, true_x: None })
    }

    pub fn with_truth(mut self, x: Vec<f64>) -> Result<Self> {
        if x.len() != self.a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "truth has length {}, A has {} columns",
                x.len(),
                self.a.ncols()
            )));
        }
        self.true_x = Some(x);
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterations,
    Infeasible,
    /// A feasible point beat the caller's l1 cutoff.
    CutOff,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::Infeasible => "infeasible",
            Status::CutOff => "cut_off",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: Vec<f64>,
    pub l1_objective: f64,
    /// `||y - A x_hat||_2`
    pub residual_norm: f64,
    pub iterations: usize,
    pub status: Status,
    /// Seconds.
    pub wall_time: f64,
    /// Certified lower bound on the optimum, when one was found.
    pub lower_bound: Option<f64>,
}

/// Solves one instance, factoring `A A^T` on the way. Use [`Decoder`] to
/// amortize the factorization across instances.
pub fn basis_pursuit(instance: &RecoveryInstance, config: &SolverConfig) -> Result<RecoveryResult> {
    let decoder = Decoder::new(instance.a, config)?;
    let result = decoder.solve(&instance.y, instance.epsilon, config)?;
    if result.status == Status::Infeasible {
        return Err(Error::Infeasible);
    }
    Ok(result)
}

/// Relative l2 error `||x_hat - x|| / ||x||` and whether it is within `threshold`.
pub fn evaluate_recovery(x_hat: &[f64], true_x: &[f64], threshold: f64) -> Result<(f64, bool)> {
    if x_hat.len() != true_x.len() {
        return Err(Error::DimensionMismatch(format!(
            "estimate has length {}, truth has {}",
            x_hat.len(),
            true_x.len()
        )));
    }
    let scale = norm2(true_x);
    if scale == 0.0 {
        return Err(Error::ZeroTruth);
    }
    let diff: f64 = x_hat.iter().zip(true_x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let rel = diff / scale;
    Ok((rel, rel <= threshold))
}

/// `M v` using additions only.
pub fn sparse_matvec(m: &BinaryMatrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!("vector length {} vs {} columns", v.len(), m.cols())));
    }
    Ok(m.matvec(v))
}

/// `M^T v` using additions only.
pub fn sparse_rmatvec(m: &BinaryMatrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!("vector length {} vs {} rows", v.len(), m.rows())));
    }
    Ok(m.rmatvec(v))
}
