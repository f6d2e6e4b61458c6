#![allow(dead_code)]

use binary_cs::analysis::Girth;
use binary_cs::matrices::{BinaryMatrix, DenseMatrix};
use nalgebra::DMatrix;

/// `(n, k, delta, xi)` tuples for the bound oracles.
pub const BOUND_TUPLES: [(usize, usize, f64, f64); 10] = [
    (900, 5, 0.5, 1e-9),
    (900, 20, 0.5, 1e-9),
    (10_000, 5, 0.5, 1e-9),
    (10_000, 30, 0.3, 1e-6),
    (100_000, 200, 0.5, 1e-9),
    (100_000, 20, 0.1, 1e-3),
    (961, 4, 0.7, 0.01),
    (256, 12, 0.5, 1e-9),
    (1_000_000, 1000, 0.9, 0.5),
    (50, 25, 0.25, 1e-12),
];

/// Shortest cycle by exhaustive search over simple paths whose smallest node
/// is the start, trying lengths 4, 6, ... up to `max_len`.
pub fn brute_force_girth(m: &BinaryMatrix, max_len: usize) -> Girth {
    let n = m.cols();
    let total = n + m.rows();
    let mut adj = vec![Vec::new(); total];
    for j in 0..n {
        for &i in m.column(j) {
            adj[j].push(n + i);
            adj[n + i].push(j);
        }
    }
    fn extend(adj: &[Vec<usize>], start: usize, path: &mut Vec<usize>, on: &mut [bool], len: usize) -> bool {
        let last = *path.last().unwrap();
        if path.len() == len {
            return adj[last].contains(&start);
        }
        for &v in &adj[last] {
            if v > start && !on[v] {
                on[v] = true;
                path.push(v);
                let found = extend(adj, start, path, on, len);
                path.pop();
                on[v] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    for len in (4..=max_len.min(total)).step_by(2) {
        for s in 0..total {
            let mut on = vec![false; total];
            on[s] = true;
            if extend(&adj, s, &mut vec![s], &mut on, len) {
                return Girth::Finite(len);
            }
        }
    }
    Girth::Infinite
}

/// Rank and smallest nonzero singular value from nalgebra's SVD, with the same
/// relative cut on squared singular values as the crate.
pub fn svd_rank_and_sigma_min(a: &DenseMatrix, threshold: f64) -> (usize, f64) {
    let m = DMatrix::from_row_slice(a.rows(), a.cols(), a.data());
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let kept: Vec<f64> = sv.iter().cloned().filter(|s| s * s > threshold * max * max).collect();
    (kept.len(), kept.iter().cloned().fold(f64::INFINITY, f64::min))
}

pub fn oracle_gaussian(n: usize, k: usize, delta: f64, xi: f64) -> u64 {
    let log_en_k = 1.0 + (n as f64).ln() - (k as f64).ln();
    let g = 1.0 + 1.0 / (2.0 * log_en_k).sqrt();
    let eta = ((1.0 + delta).sqrt() - 1.0) / g;
    let inner = k as f64 * log_en_k + 2f64.ln() - xi.ln();
    (2.0 * inner / (eta * eta)).ceil() as u64
}

pub fn oracle_universal(n: usize, k: usize, cap_c: f64) -> u64 {
    let theta = (n / k) as f64;
    let log_t = |x: f64| x.ln() / theta.ln();
    let u = 0.5;
    let h = -u * log_t(u / (theta - 1.0)) - (1.0 - u) * log_t(1.0 - u);
    let m = (1.0 - h) / (4.0 + 2.0 * cap_c).ln() * k as f64 * theta.ln();
    (m.ceil() as u64).max(1)
}

/// Geometric-series closed form.
pub fn oracle_c_prime(g: usize, d: u64) -> u64 {
    let top = ((g - 2) / 4) as u32;
    if d == 2 {
        return 2 * (top as u64 + 1);
    }
    2 * ((d - 1).pow(top + 1) - 1) / (d - 2)
}

pub fn oracle_kbar(d: u64, g: usize) -> u64 {
    let mut v = 1;
    for _ in 0..(g - 2) / 4 {
        v *= d - 1;
    }
    v
}

pub fn oracle_moore(dl: f64, dr: f64, g: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for i in 0..g / 2 {
        sum += term;
        term *= if i % 2 == 0 { dl - 1.0 } else { dr - 1.0 };
    }
    sum
}

/// `(rho, tau, C, D)` from `alpha = 2 d / lambda` and the column bound's beta.
pub fn oracle_rnsp(d: usize, lambda: usize, n: usize, sigma: f64, k: usize) -> (f64, f64, f64, f64) {
    let beta = (lambda as f64 / (2.0 * d as f64) + 1.0) * (n as f64).sqrt() / sigma;
    let alpha = 2.0 * d as f64 / lambda as f64;
    let k = k as f64;
    let rho = k / (alpha - k);
    let tau = alpha * k * beta / (alpha - k);
    (rho, tau, 2.0 * (1.0 + rho) / (1.0 - rho), 4.0 * tau / (1.0 - rho))
}

/// `cells.csv` with the `mean_solver_ms` column removed.
pub fn cells_without_timing(path: &std::path::Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let mut out = String::new();
    for line in text.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        let kept: Vec<&str> = fields.iter().enumerate().filter(|(i, _)| *i != 8).map(|(_, f)| *f).collect();
        out.push_str(&kept.join(","));
        out.push('\n');
    }
    out
}
