use std::sync::OnceLock;
use std::time::Instant;

use super::{RecoveryResult, SolverConfig, Status};
use crate::linalg::{dot, norm1, norm2, norm_inf, Cholesky};
use crate::matrices::LinearOperator;
use crate::{Error, Result};

const CHECK_EVERY: usize = 10;
const BALANCE_RATIO: f64 = 10.0;
const BALANCE_STEP: f64 = 2.0;
// A cut-off point must solve `A x = y` much more tightly than `feasibility_tol`.
const CUTOFF_FEASIBILITY: f64 = 1e-9;
const CERTIFICATE_TOL: f64 = 1e-9;

/// Basis-pursuit solver bound to one matrix.
pub struct Decoder<'a> {
    op: &'a dyn LinearOperator,
    gram: Vec<f64>,
    /// `A A^T + ridge I`
    exact: Cholesky,
    /// `A A^T + I`, for the noisy problem.
    noisy: OnceLock<Cholesky>,
}

struct Work {
    ax: Vec<f64>,
    t: Vec<f64>,
    atx: Vec<f64>,
}

impl<'a> Decoder<'a> {
    pub fn new(op: &'a dyn LinearOperator, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let m = op.nrows();
        let mut gram = op.gram_rows();
        let mean_diag = (0..m).map(|i| gram[i * m + i]).sum::<f64>() / m as f64;
        if !(mean_diag > 0.0) {
            return Err(Error::InvalidMatrix("A A^T has zero trace".into()));
        }
        let mut regularized = gram.clone();
        for i in 0..m {
            regularized[i * m + i] += config.ridge * mean_diag;
        }
        let exact = Cholesky::factor(&regularized, m)?;
        // The noisy factor is built on first use from the unregularized Gram.
        gram.shrink_to_fit();
        Ok(Decoder { op, gram, exact, noisy: OnceLock::new() })
    }

    pub fn operator(&self) -> &dyn LinearOperator {
        self.op
    }

    fn noisy_factor(&self) -> Result<&Cholesky> {
        if let Some(c) = self.noisy.get() {
            return Ok(c);
        }
        let m = self.op.nrows();
        let mut g = self.gram.clone();
        for i in 0..m {
            g[i * m + i] += 1.0;
        }
        let c = Cholesky::factor(&g, m)?;
        Ok(self.noisy.get_or_init(|| c))
    }

    fn work(&self) -> Work {
        Work {
            ax: vec![0.0; self.op.nrows()],
            t: vec![0.0; self.op.nrows()],
            atx: vec![0.0; self.op.ncols()],
        }
    }

    fn residual(&self, x: &[f64], y: &[f64], w: &mut Work) -> f64 {
        self.op.apply(x, &mut w.ax);
        w.ax.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Minimum-norm solution of `A x = y` (least squares if inconsistent).
    fn min_norm(&self, y: &[f64], w: &mut Work) -> Vec<f64> {
        w.t.copy_from_slice(y);
        self.exact.solve_in_place(&mut w.t);
        let mut x = vec![0.0; self.op.ncols()];
        self.op.apply_transpose(&w.t, &mut x);
        x
    }

    /// Solves basis pursuit for `y` with noise bound `epsilon`.
    pub fn solve(&self, y: &[f64], epsilon: f64, config: &SolverConfig) -> Result<RecoveryResult> {
        self.solve_with_cutoff(y, epsilon, config, None)
    }

    /// Like [`Decoder::solve`], but for `epsilon = 0` stops with
    /// [`Status::CutOff`] as soon as a feasible iterate has l1 norm below
    /// `l1_cutoff`.
    pub fn solve_with_cutoff(
        &self,
        y: &[f64],
        epsilon: f64,
        config: &SolverConfig,
        l1_cutoff: Option<f64>,
    ) -> Result<RecoveryResult> {
        if y.len() != self.op.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "y has length {}, A has {} rows",
                y.len(),
                self.op.nrows()
            )));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        config.validate()?;
        let start = Instant::now();
        let n = self.op.ncols();
        let y_norm = norm2(y);
        let mut w = self.work();
        let done = |x: Vec<f64>, iterations, status, residual, lower_bound| RecoveryResult {
            l1_objective: norm1(&x),
            x_hat: x,
            residual_norm: residual,
            iterations,
            status,
            wall_time: start.elapsed().as_secs_f64(),
            lower_bound,
        };
        if y_norm <= epsilon {
            return Ok(done(vec![0.0; n], 0, Status::Converged, y_norm, Some(0.0)));
        }
        let x0 = self.min_norm(y, &mut w);
        let distance = self.residual(&x0, y, &mut w);
        if distance > epsilon + config.feasibility_tol * y_norm {
            return Ok(done(x0, 0, Status::Infeasible, distance, None));
        }
        let out = if epsilon == 0.0 {
            self.run_exact(y, x0, config, l1_cutoff, &mut w)
        } else {
            self.run_noisy(y, epsilon, config, &mut w)?
        };
        let residual = self.residual(&out.x, y, &mut w);
        Ok(done(out.x, out.iterations, out.status, residual, out.lower_bound))
    }

    /// `x = v - A^T (A A^T)^{-1} (A v - y)`
    fn project(&self, v: &[f64], y: &[f64], x: &mut [f64], w: &mut Work) {
        self.op.apply(v, &mut w.t);
        for (t, yi) in w.t.iter_mut().zip(y) {
            *t -= yi;
        }
        self.exact.solve_in_place(&mut w.t);
        self.op.apply_transpose(&w.t, &mut w.atx);
        for ((xi, vi), ci) in x.iter_mut().zip(v).zip(&w.atx) {
            *xi = vi - ci;
        }
    }

    /// Dual lower bound `y^T nu` with `nu` fitted to the subgradient `rho u`
    /// and scaled into `||A^T nu||_inf <= 1`.
    fn dual_bound(&self, y: &[f64], g: &[f64], w: &mut Work) -> f64 {
        self.op.apply(g, &mut w.t);
        self.exact.solve_in_place(&mut w.t);
        self.op.apply_transpose(&w.t, &mut w.atx);
        let scale = norm_inf(&w.atx).max(1.0);
        dot(y, &w.t) / scale
    }

    fn run_exact(&self, y: &[f64], x0: Vec<f64>, cfg: &SolverConfig, l1_cutoff: Option<f64>, w: &mut Work) -> Outcome {
        let n = self.op.ncols();
        let y_norm = norm2(y);
        let sqrt_n = (n as f64).sqrt();
        let alpha = cfg.relaxation;
        let mut rho = cfg.rho_init;
        let mut z = x0;
        let mut u = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut z_old = vec![0.0; n];
        let mut refit: Option<Refit> = None;
        let mut last_support: Vec<usize> = Vec::new();
        let mut polished_support: Vec<usize> = Vec::new();

        for it in 1..=cfg.max_iterations {
            for ((vi, zi), ui) in v.iter_mut().zip(&z).zip(&u) {
                *vi = zi - ui;
            }
            self.project(&v, y, &mut x, w);
            if l1_cutoff.is_some_and(|c| norm1(&x) < c) && self.residual(&x, y, w) <= CUTOFF_FEASIBILITY * y_norm {
                return Outcome::new(x, it, Status::CutOff, None);
            }
            z_old.copy_from_slice(&z);
            let kappa = 1.0 / rho;
            let mut r2 = 0.0;
            let mut s2 = 0.0;
            for i in 0..n {
                let xr = alpha * x[i] + (1.0 - alpha) * z_old[i];
                let p = xr + u[i];
                z[i] = p.signum() * (p.abs() - kappa).max(0.0);
                u[i] += xr - z[i];
                r2 += (x[i] - z[i]) * (x[i] - z[i]);
                s2 += (z[i] - z_old[i]) * (z[i] - z_old[i]);
            }
            let r = r2.sqrt();
            let s = rho * s2.sqrt();

            if cfg.polish && it % CHECK_EVERY == 0 {
                let support = support_of(&z);
                if support == last_support && support != polished_support && !support.is_empty() {
                    polished_support = support.clone();
                    if let Some(r) = self.polish(&support, y, cfg, w) {
                        if self.certifies(&r, vec![0.0; self.op.nrows()], w) {
                            let lb = norm1(&r.x);
                            return Outcome::new(r.x, it, Status::Converged, Some(lb));
                        }
                        if refit.as_ref().is_none_or(|b| norm1(&r.x) < norm1(&b.x)) {
                            refit = Some(r);
                        }
                    }
                }
                last_support = support;
                // The dual estimate keeps improving, so the best refit is re-tested.
                if let Some(r) = &refit {
                    let g: Vec<f64> = u.iter().map(|ui| rho * ui).collect();
                    let nu = self.dual_estimate(&g, w);
                    if self.certifies(r, nu, w) {
                        let r = refit.take().expect("refit present");
                        let lb = norm1(&r.x);
                        return Outcome::new(r.x, it, Status::Converged, Some(lb));
                    }
                }
            }

            let eps_pri = 1e-12 * sqrt_n + cfg.primal_tol * norm2(&x).max(norm2(&z));
            let eps_dual = 1e-12 * sqrt_n + cfg.dual_tol * rho * norm2(&u);
            if r <= eps_pri && s <= eps_dual {
                let g: Vec<f64> = u.iter().map(|ui| rho * ui).collect();
                let lb = self.dual_bound(y, &g, w);
                let x = self.pick(x, refit.map(|r| r.x), y, y_norm, cfg, w);
                return Outcome::new(x, it, Status::Converged, Some(lb));
            }

            if r > BALANCE_RATIO * s && rho * BALANCE_STEP <= cfg.rho_max {
                rho *= BALANCE_STEP;
                u.iter_mut().for_each(|ui| *ui /= BALANCE_STEP);
            } else if s > BALANCE_RATIO * r && rho / BALANCE_STEP >= cfg.rho_min {
                rho /= BALANCE_STEP;
                u.iter_mut().for_each(|ui| *ui *= BALANCE_STEP);
            }
        }
        let x = self.pick(x, refit.map(|r| r.x), y, y_norm, cfg, w);
        Outcome::new(x, cfg.max_iterations, Status::MaxIterations, None)
    }

    /// The feasible point with the smaller l1 norm.
    fn pick(&self, x: Vec<f64>, polished: Option<Vec<f64>>, y: &[f64], y_norm: f64, cfg: &SolverConfig, w: &mut Work) -> Vec<f64> {
        match polished {
            Some(p) if norm1(&p) <= norm1(&x) && self.residual(&p, y, w) <= cfg.feasibility_tol * y_norm => p,
            _ => x,
        }
    }

    /// Least-squares refit on `support`, kept when it solves `A x = y`.
    fn polish(&self, support: &[usize], y: &[f64], cfg: &SolverConfig, w: &mut Work) -> Option<Refit> {
        let m = self.op.nrows();
        let s = support.len();
        if s > m {
            return None;
        }
        let mut cols = vec![0.0; s * m];
        for (c, &j) in support.iter().enumerate() {
            for i in 0..m {
                cols[c * m + i] = self.op.entry(i, j);
            }
        }
        let mut normal = vec![0.0; s * s];
        for a in 0..s {
            for b in a..s {
                let v = dot(&cols[a * m..(a + 1) * m], &cols[b * m..(b + 1) * m]);
                normal[a * s + b] = v;
                normal[b * s + a] = v;
            }
        }
        let chol = Cholesky::factor(&normal, s).ok()?;
        let mut coef: Vec<f64> = (0..s).map(|c| dot(&cols[c * m..(c + 1) * m], y)).collect();
        chol.solve_in_place(&mut coef);
        if coef.contains(&0.0) {
            return None;
        }
        let mut x = vec![0.0; self.op.ncols()];
        for (&j, &c) in support.iter().zip(&coef) {
            x[j] = c;
        }
        if self.residual(&x, y, w) > cfg.feasibility_tol * norm2(y) {
            return None;
        }
        let signs = coef.iter().map(|c| c.signum()).collect();
        Some(Refit { x, cols, chol, signs })
    }

    /// Moves `nu` onto `{A_S^T nu = sign(x_S)}` and reports whether the result
    /// is dual feasible, which proves the refit l1-optimal.
    fn certifies(&self, refit: &Refit, mut nu: Vec<f64>, w: &mut Work) -> bool {
        let m = self.op.nrows();
        let mut gap: Vec<f64> = refit
            .signs
            .iter()
            .enumerate()
            .map(|(c, sg)| sg - dot(&refit.cols[c * m..(c + 1) * m], &nu))
            .collect();
        refit.chol.solve_in_place(&mut gap);
        for (c, g) in gap.iter().enumerate() {
            for (v, a) in nu.iter_mut().zip(&refit.cols[c * m..(c + 1) * m]) {
                *v += g * a;
            }
        }
        self.op.apply_transpose(&nu, &mut w.atx);
        norm_inf(&w.atx) <= 1.0 + CERTIFICATE_TOL
    }

    /// Dual estimate `(A A^T)^{-1} A g` for a subgradient estimate `g`.
    fn dual_estimate(&self, g: &[f64], w: &mut Work) -> Vec<f64> {
        self.op.apply(g, &mut w.t);
        self.exact.solve_in_place(&mut w.t);
        w.t.clone()
    }

    fn run_noisy(&self, y: &[f64], epsilon: f64, cfg: &SolverConfig, w: &mut Work) -> Result<Outcome> {
        let chol = self.noisy_factor()?;
        let (m, n) = (self.op.nrows(), self.op.ncols());
        let y_norm = norm2(y);
        let sqrt_d = ((n + m) as f64).sqrt();
        let alpha = cfg.relaxation;
        let mut rho = cfg.rho_init;
        // Blocks: [x (n); r (m)] with A x + r = y, ||r|| <= epsilon.
        let mut z = vec![0.0; n + m];
        let mut u = vec![0.0; n + m];
        let mut v = vec![0.0; n + m];
        let mut wv = vec![0.0; n + m];
        let mut z_old = vec![0.0; n + m];
        let mut best: Option<Vec<f64>> = None;
        let feasible = |x: &[f64], w: &mut Work| self.residual(x, y, w) <= epsilon + cfg.feasibility_tol * y_norm;

        for it in 1..=cfg.max_iterations {
            for ((vi, zi), ui) in v.iter_mut().zip(&z).zip(&u) {
                *vi = zi - ui;
            }
            // Projection onto {A x + r = y}.
            self.op.apply(&v[..n], &mut w.t);
            for ((t, yi), ri) in w.t.iter_mut().zip(y).zip(&v[n..]) {
                *t += ri - yi;
            }
            chol.solve_in_place(&mut w.t);
            self.op.apply_transpose(&w.t, &mut w.atx);
            for i in 0..n {
                wv[i] = v[i] - w.atx[i];
            }
            for i in 0..m {
                wv[n + i] = v[n + i] - w.t[i];
            }

            z_old.copy_from_slice(&z);
            let kappa = 1.0 / rho;
            for i in 0..n + m {
                let xr = alpha * wv[i] + (1.0 - alpha) * z_old[i];
                z[i] = xr + u[i];
            }
            for zi in &mut z[..n] {
                *zi = zi.signum() * (zi.abs() - kappa).max(0.0);
            }
            let r_norm = norm2(&z[n..]);
            if r_norm > epsilon {
                let shrink = epsilon / r_norm;
                z[n..].iter_mut().for_each(|zi| *zi *= shrink);
            }
            let mut r2 = 0.0;
            let mut s2 = 0.0;
            for i in 0..n + m {
                let xr = alpha * wv[i] + (1.0 - alpha) * z_old[i];
                u[i] += xr - z[i];
                r2 += (wv[i] - z[i]) * (wv[i] - z[i]);
                s2 += (z[i] - z_old[i]) * (z[i] - z_old[i]);
            }
            let r = r2.sqrt();
            let s = rho * s2.sqrt();
            let eps_pri = 1e-12 * sqrt_d + cfg.primal_tol * norm2(&wv).max(norm2(&z));
            let eps_dual = 1e-12 * sqrt_d + cfg.dual_tol * rho * norm2(&u);
            if r <= eps_pri && s <= eps_dual {
                let candidates = [z[..n].to_vec(), wv[..n].to_vec()];
                let chosen = candidates
                    .into_iter()
                    .filter(|c| feasible(c, w))
                    .min_by(|a, b| norm1(a).total_cmp(&norm1(b)));
                if let Some(x) = chosen {
                    return Ok(Outcome::new(x, it, Status::Converged, None));
                }
            }
            if it % CHECK_EVERY == 0 && feasible(&z[..n], w) && best.as_ref().is_none_or(|b| norm1(&z[..n]) < norm1(b)) {
                best = Some(z[..n].to_vec());
            }

            if r > BALANCE_RATIO * s && rho * BALANCE_STEP <= cfg.rho_max {
                rho *= BALANCE_STEP;
                u.iter_mut().for_each(|ui| *ui /= BALANCE_STEP);
            } else if s > BALANCE_RATIO * r && rho / BALANCE_STEP >= cfg.rho_min {
                rho /= BALANCE_STEP;
                u.iter_mut().for_each(|ui| *ui *= BALANCE_STEP);
            }
        }
        let x = best.unwrap_or_else(|| wv[..n].to_vec());
        Ok(Outcome::new(x, cfg.max_iterations, Status::MaxIterations, None))
    }
}

struct Refit {
    x: Vec<f64>,
    /// Columns of `A_S`, column-major.
    cols: Vec<f64>,
    /// `A_S^T A_S`
    chol: Cholesky,
    signs: Vec<f64>,
}

struct Outcome {
    x: Vec<f64>,
    iterations: usize,
    status: Status,
    lower_bound: Option<f64>,
}

impl Outcome {
    fn new(x: Vec<f64>, iterations: usize, status: Status, lower_bound: Option<f64>) -> Self {
        Outcome { x, iterations, status, lower_bound }
    }
}

/// Indices of entries above a small fraction of the largest magnitude.
fn support_of(z: &[f64]) -> Vec<usize> {
    let peak = norm_inf(z);
    if peak == 0.0 {
        return Vec::new();
    }
    let cut = 1e-8 * peak;
    (0..z.len()).filter(|&i| z[i].abs() > cut).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{construct_array_matrix, construct_gaussian_matrix, BinaryMatrix};

    fn sparse(n: usize, entries: &[(usize, f64)]) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for &(i, v) in entries {
            x[i] = v;
        }
        x
    }

    #[test]
    fn zero_measurements_give_zero() {
        let h = construct_array_matrix(5, 4).unwrap();
        let cfg = SolverConfig::default();
        let d = Decoder::new(&h, &cfg).unwrap();
        let r = d.solve(&[0.0; 20], 0.0, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.x_hat.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn recovers_guaranteed_sparse_signal() {
        let h = construct_array_matrix(7, 4).unwrap();
        let cfg = SolverConfig::default();
        let d = Decoder::new(&h, &cfg).unwrap();
        let x = sparse(49, &[(3, 1.0), (20, -1.0), (41, 1.0)]);
        let r = d.solve(&h.matvec(&x), 0.0, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged);
        let err: f64 = r.x_hat.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn inconsistent_measurements_are_infeasible() {
        // Two identical rows cannot produce different measurements.
        let m = BinaryMatrix::from_columns(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let cfg = SolverConfig::default();
        let d = Decoder::new(&m, &cfg).unwrap();
        assert_eq!(d.solve(&[1.0, 2.0], 0.0, &cfg).unwrap().status, Status::Infeasible);
        assert_eq!(d.solve(&[1.0, 2.0], 1.0, &cfg).unwrap().status, Status::Converged);
    }

    #[test]
    fn noisy_solution_is_feasible_and_short() {
        let h = construct_array_matrix(7, 4).unwrap();
        let cfg = SolverConfig::default();
        let d = Decoder::new(&h, &cfg).unwrap();
        let x = sparse(49, &[(5, 1.0), (30, -1.0)]);
        let mut y = h.matvec(&x);
        y[0] += 0.01;
        let eps = 0.02;
        let r = d.solve(&y, eps, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.residual_norm <= eps + 1e-6 * norm2(&y));
        assert!(r.l1_objective <= norm1(&x) + 1e-6);
    }

    #[test]
    fn dense_operator() {
        let a = construct_gaussian_matrix(30, 60, 7).unwrap();
        let cfg = SolverConfig::default();
        let d = Decoder::new(&a, &cfg).unwrap();
        let x = sparse(60, &[(1, 0.5), (17, -1.0), (44, 0.25)]);
        let r = d.solve(&a.matvec(&x), 0.0, &cfg).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.x_hat.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-7));
    }
}
