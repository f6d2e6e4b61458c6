//! Closed-form guarantees and lower bounds on the number of measurements.
//!
//! Strict inequalities on a sparsity order are turned into "largest integer
//! strictly below the bound".

use crate::analysis::MatrixAnalysis;
use crate::matrices::next_prime_geq;
use crate::{Error, Result};

/// RIP constant of order `k` implied by coherence: `(k-1) mu`.
pub fn rip_from_coherence(k: usize, mu: f64) -> Result<f64> {
    if k == 0 || !(mu > 0.0) {
        return Err(Error::InvalidParameter("need k >= 1 and mu > 0".into()));
    }
    let delta = (k - 1) as f64 * mu;
    if delta >= 1.0 {
        return Err(Error::NotApplicable(format!("(k-1)mu = {delta} >= 1")));
    }
    Ok(delta)
}

/// Largest `k` with `k < floor(2/(3 sqrt(3) mu) + 2/3)`.
pub fn max_k_rip(mu: f64) -> usize {
    let bound = (2.0 / (3.0 * 3f64.sqrt() * mu) + 2.0 / 3.0).floor();
    (bound as usize).saturating_sub(1)
}

/// Largest `k` with `k < d_L / lambda`.
pub fn max_k_rnsp(d_l: usize, lambda: usize) -> usize {
    (d_l + lambda - 1) / lambda - 1
}

/// Norm on the measurement space in the robustness term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormTag {
    L2,
    L1,
}

impl NormTag {
    /// Constant `c` with `||u||_2 <= c ||u||` on the measurement space.
    pub fn constant(self) -> f64 {
        1.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RnspCertificate {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub tau: f64,
    pub cap_c: f64,
    pub cap_d: f64,
    pub norm_tag: NormTag,
}

/// RNSP constants from `|h_i| <= ||h||_1 / alpha + beta ||Ah||`.
pub fn lemma_certificate(alpha: f64, beta: f64, k: usize, norm_tag: NormTag) -> Result<RnspCertificate> {
    if k == 0 {
        return Err(Error::InvalidParameter("sparsity order must be at least 1".into()));
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    let kf = k as f64;
    if 2.0 * kf >= alpha {
        return Err(Error::OrderTooLarge { k, limit: alpha / 2.0 });
    }
    let rho = kf / (alpha - kf);
    let tau = alpha * kf * beta / (alpha - kf);
    Ok(RnspCertificate {
        k,
        alpha,
        beta,
        rho,
        tau,
        cap_c: 2.0 * (1.0 + rho) / (1.0 - rho),
        cap_d: 4.0 * tau / (1.0 - rho),
        norm_tag,
    })
}

/// `beta = (lambda/(2 d_L) + 1) c sqrt(n) / sigma_min`.
pub fn rnsp_beta(d_l: usize, lambda: usize, n: usize, sigma_min: f64, c: f64) -> f64 {
    (lambda as f64 / (2.0 * d_l as f64) + 1.0) * c * (n as f64).sqrt() / sigma_min
}

/// Certificate of order `k` for a left-regular binary matrix with `k < d_L/lambda`.
pub fn rnsp_certificate(analysis: &MatrixAnalysis, k: usize) -> Result<RnspCertificate> {
    let d_l = analysis.left_degree().ok_or(Error::NotLeftRegular)?;
    rnsp_certificate_from(d_l, analysis.lambda, analysis.cols, analysis.sigma_min, k, NormTag::L2)
}

pub fn rnsp_certificate_from(
    d_l: usize,
    lambda: usize,
    n: usize,
    sigma_min: f64,
    k: usize,
    norm_tag: NormTag,
) -> Result<RnspCertificate> {
    if d_l == 0 || lambda == 0 {
        return Err(Error::InvalidParameter("d_L and lambda must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("sparsity order must be at least 1".into()));
    }
    if k * lambda >= d_l {
        return Err(Error::OrderTooLarge { k, limit: d_l as f64 / lambda as f64 });
    }
    let alpha = 2.0 * d_l as f64 / lambda as f64;
    let beta = rnsp_beta(d_l, lambda, n, sigma_min, norm_tag.constant());
    let mut cert = lemma_certificate(alpha, beta, k, norm_tag)?;
    // Same values, written in the integer form lambda k / (2 d_L - lambda k).
    let (two_d, lk) = (2.0 * d_l as f64, (lambda * k) as f64);
    cert.rho = lk / (two_d - lk);
    cert.tau = two_d * k as f64 * beta / (two_d - lk);
    cert.cap_c = 2.0 * (1.0 + cert.rho) / (1.0 - cert.rho);
    cert.cap_d = 4.0 * cert.tau / (1.0 - cert.rho);
    Ok(cert)
}

fn girth_t(g: usize) -> Result<(u32, bool)> {
    if g < 4 || g % 2 == 1 {
        return Err(Error::InvalidParameter(format!("girth must be even and >= 4, got {g}")));
    }
    Ok(if g % 4 == 2 { ((g / 4) as u32, true) } else { ((g / 4) as u32, false) })
}

/// `C'` for girth `g >= 6`: twice the sum of `(d_L-1)^i` for `i <= t` when
/// `g = 4t+2`, and for `i <= t-1` when `g = 4t`.
pub fn c_prime(g: usize, d_l: u64) -> Result<u64> {
    if g < 6 {
        return Err(Error::InvalidParameter(format!("C' needs girth >= 6, got {g}")));
    }
    let (t, two_mod_four) = girth_t(g)?;
    let top = if two_mod_four { t } else { t - 1 };
    let base = d_l.saturating_sub(1);
    let mut sum: u64 = 0;
    for i in 0..=top {
        sum = sum
            .checked_add(base.checked_pow(i).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    sum.checked_mul(2).ok_or_else(overflow)
}

fn overflow() -> Error {
    Error::InvalidParameter("integer overflow".into())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GirthCertificate {
    pub c_prime: u64,
    pub rho: f64,
    pub tau: f64,
    /// `tau` evaluated as `(C' - k) beta / (C' k)`.
    pub tau_printed: f64,
}

/// RNSP constants from the `C'` null-space bound, valid for `k < C'/2`.
pub fn rnsp_girth_certificate(d_l: usize, g: usize, k: usize, beta: f64) -> Result<GirthCertificate> {
    if k == 0 {
        return Err(Error::InvalidParameter("sparsity order must be at least 1".into()));
    }
    let cp = c_prime(g, d_l as u64)?;
    if 2 * k as u64 >= cp {
        return Err(Error::OrderTooLarge { k, limit: cp as f64 / 2.0 });
    }
    let (c, kf) = (cp as f64, k as f64);
    Ok(GirthCertificate {
        c_prime: cp,
        rho: kf / (c - kf),
        tau: c * kf * beta / (c - kf),
        tau_printed: (c - kf) / (c * kf) * beta,
    })
}

/// `(d_L-1)^t` for `g = 4t+2`, `(d_L-1)^(t-1)` for `g = 4t`.
pub fn kbar(d_l: usize, g: usize) -> Result<u64> {
    let (t, two_mod_four) = girth_t(g)?;
    let e = if two_mod_four { t } else { t - 1 };
    (d_l as u64 - 1).checked_pow(e).ok_or_else(overflow)
}

/// Moore-type lower bound on `m` for girth `g = 2r` with average degrees.
pub fn moore_bound(avg_d_l: f64, avg_d_r: f64, g: usize) -> Result<f64> {
    if g < 6 || g % 2 == 1 {
        return Err(Error::InvalidParameter(format!("girth must be even and >= 6, got {g}")));
    }
    let r = g / 2;
    Ok((0..r)
        .map(|i| (avg_d_l - 1.0).powi(i.div_ceil(2) as i32) * (avg_d_r - 1.0).powi((i / 2) as i32))
        .sum())
}

/// Lower bound on `m` for a left-regular matrix of girth `g` and `kbar`.
pub fn girth_lower_bound(n: usize, kbar: f64, g: usize) -> Result<f64> {
    if g < 6 {
        return Err(Error::InvalidParameter(format!("girth must be >= 6, got {g}")));
    }
    let (t, two_mod_four) = girth_t(g)?;
    let (n, t) = (n as f64, t as f64);
    Ok(if two_mod_four {
        kbar.powf(2.0 / (t + 1.0)) * n.powf(t / (t + 1.0))
    } else {
        kbar.powf((2.0 * t - 1.0) / (t * (t - 1.0))) * n.powf((t - 1.0) / t)
    })
}

/// Measurements sufficient for an `m x n` Gaussian matrix to have RIP of
/// order `k` with constant `delta`, with probability at least `1 - xi`.
pub fn gaussian_sample_bound(n: usize, k: usize, delta: f64, xi: f64) -> Result<u64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if !(delta > 0.0 && delta < 1.0 && xi > 0.0 && xi < 1.0) {
        return Err(Error::InvalidParameter("delta and xi must lie in (0,1)".into()));
    }
    let (n, k) = (n as f64, k as f64);
    let log_term = (std::f64::consts::E * n / k).ln();
    let g = 1.0 + 1.0 / (2.0 * log_term).sqrt();
    let eta = ((1.0 + delta).sqrt() - 1.0) / g;
    Ok((2.0 / (eta * eta) * (k * log_term + (2.0 / xi).ln())).ceil() as u64)
}

/// theta-ary entropy at one half: `log_theta(4(theta-1)) / 2`.
pub fn theta_entropy_half(theta: u64) -> f64 {
    let t = theta as f64;
    0.5 * (4.0 * (t - 1.0)).ln() / t.ln()
}

/// Necessary number of measurements for stable recovery with constant `cap_c`.
pub fn universal_lower_bound(n: usize, k: usize, cap_c: f64) -> Result<u64> {
    if k == 0 || !(cap_c > 0.0) {
        return Err(Error::InvalidParameter("need k >= 1 and C > 0".into()));
    }
    let theta = (n / k) as u64;
    if theta < 2 {
        return Err(Error::DegenerateTheta(theta as usize));
    }
    let value = (1.0 - theta_entropy_half(theta)) * k as f64 * (theta as f64).ln()
        / (4.0 + 2.0 * cap_c).ln();
    // theta = 2 makes the entropy exactly one.
    Ok((value.ceil() as u64).max(1))
}

/// Primes and measurement counts of the two deterministic families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QSelection {
    pub q_array: u64,
    pub m_array: u64,
    pub q_devore: u64,
    pub m_devore: u64,
}

pub fn q_selection(n: usize, k: usize) -> Result<QSelection> {
    if k == 0 || n < 4 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and n >= 4, got k={k}, n={n}")));
    }
    let q_array = next_prime_geq(ceil_sqrt(n as u64));
    let q_devore = next_prime_geq(2 * k as u64 + 1);
    Ok(QSelection {
        q_array,
        m_array: (k as u64 + 1) * q_array,
        q_devore,
        m_devore: q_devore * q_devore,
    })
}

pub(crate) fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

/// Inputs of the bound report that are not fixed by `(n, k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub delta: f64,
    pub xi: f64,
    /// RIP order used in the Gaussian bound; `None` means `ceil(3k/2)`.
    pub rip_order: Option<usize>,
    /// Stable-recovery constant; `None` means `2(k+1)`.
    pub cap_c: Option<f64>,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { delta: 0.5, xi: 1e-9, rip_order: None, cap_c: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBoundReport {
    pub n: usize,
    pub k: usize,
    pub q_devore: u64,
    pub m_devore: u64,
    pub q_array: u64,
    pub m_array: u64,
    pub m_gaussian: u64,
    pub m_moore: u64,
    pub m_universal: u64,
    pub delta: f64,
    pub xi: f64,
    pub rip_order: usize,
    pub cap_c: f64,
}

impl MeasurementBoundReport {
    pub const CSV_HEADER: &'static str =
        "n,k,q_devore,m_devore,q_array,m_array,m_gaussian,m_moore,m_universal,delta,xi,rip_order,cap_c";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.q_devore,
            self.m_devore,
            self.q_array,
            self.m_array,
            self.m_gaussian,
            self.m_moore,
            self.m_universal,
            self.delta,
            self.xi,
            self.rip_order,
            self.cap_c
        )
    }
}

/// All measurement counts for one `(n, k)`.
///
/// `m_moore` is the Moore bound for the girth-six array matrix with left
/// degree `k+1` and right degree `q_array`.
pub fn measurement_bounds(n: usize, k: usize, params: BoundParams) -> Result<MeasurementBoundReport> {
    let q = q_selection(n, k)?;
    let rip_order = params.rip_order.unwrap_or((3 * k).div_ceil(2)).min(n);
    let cap_c = params.cap_c.unwrap_or(2.0 * (k as f64 + 1.0));
    let moore = moore_bound(k as f64 + 1.0, q.q_array as f64, 6)?;
    Ok(MeasurementBoundReport {
        n,
        k,
        q_devore: q.q_devore,
        m_devore: q.m_devore,
        q_array: q.q_array,
        m_array: q.m_array,
        m_gaussian: gaussian_sample_bound(n, rip_order, params.delta, params.xi)?,
        m_moore: (moore - 1e-9).ceil().max(1.0) as u64,
        m_universal: universal_lower_bound(n, k, cap_c)?,
        delta: params.delta,
        xi: params.xi,
        rip_order,
        cap_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherence_rip() {
        assert_eq!(rip_from_coherence(1, 0.2).unwrap(), 0.0);
        assert!((rip_from_coherence(4, 0.1).unwrap() - 0.3).abs() < 1e-15);
        assert!(matches!(rip_from_coherence(11, 0.1), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn sparsity_limits() {
        assert_eq!(max_k_rip(0.1), 3);
        assert_eq!(max_k_rip(1.0), 0);
        assert_eq!(max_k_rnsp(5, 1), 4);
        assert_eq!(max_k_rnsp(1, 1), 0);
        assert_eq!(max_k_rnsp(29, 2), 14);
        assert_eq!(max_k_rnsp(6, 2), 2);
    }

    #[test]
    fn rnsp_over_rip_factor() {
        let d = 1000usize;
        let ratio = max_k_rnsp(d, 1) as f64 / max_k_rip(1.0 / d as f64) as f64;
        assert!((ratio - 3.0 * 3f64.sqrt() / 2.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn small_certificate() {
        let c = rnsp_certificate_from(4, 1, 25, 1.0, 2, NormTag::L2).unwrap();
        assert!((c.rho - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.cap_c - 4.0).abs() < 1e-14);
        assert!(matches!(
            rnsp_certificate_from(4, 1, 25, 1.0, 4, NormTag::L2),
            Err(Error::OrderTooLarge { .. })
        ));
        assert!(rnsp_certificate_from(4, 1, 25, 1.0, 0, NormTag::L2).is_err());
    }

    #[test]
    fn c_prime_values() {
        assert_eq!(c_prime(10, 3).unwrap(), 14);
        assert_eq!(c_prime(8, 5).unwrap(), 10);
        assert_eq!(c_prime(6, 5).unwrap(), 10);
        assert!(c_prime(4, 5).is_err());
    }

    #[test]
    fn girth_certificate_tau_forms() {
        let g = rnsp_girth_certificate(3, 10, 2, 1.5).unwrap();
        assert!((g.rho - 2.0 / 12.0).abs() < 1e-15);
        assert!((g.tau - 14.0 * 2.0 * 1.5 / 12.0).abs() < 1e-14);
        assert!((g.tau_printed - 12.0 / 28.0 * 1.5).abs() < 1e-14);
        assert!(rnsp_girth_certificate(3, 10, 7, 1.0).is_err());
    }

    #[test]
    fn kbar_values() {
        assert_eq!(kbar(5, 6).unwrap(), 4);
        assert_eq!(kbar(5, 10).unwrap(), 16);
        assert_eq!(kbar(3, 8).unwrap(), 2);
    }

    #[test]
    fn moore_values() {
        assert_eq!(moore_bound(5.0, 31.0, 6).unwrap(), 125.0);
        assert_eq!(moore_bound(2.0, 2.0, 6).unwrap(), 3.0);
        assert_eq!(moore_bound(4.0, 8.0, 8).unwrap(), 88.0);
    }

    #[test]
    fn girth_bounds() {
        assert!((girth_lower_bound(961, 4.0, 6).unwrap() - 124.0).abs() < 1e-9);
        assert!((girth_lower_bound(961, 4.0, 8).unwrap() - 248.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_monotone() {
        let base = gaussian_sample_bound(1024, 10, 0.5, 1e-9).unwrap();
        assert!(gaussian_sample_bound(1024, 10, 0.7, 1e-9).unwrap() < base);
        assert!(gaussian_sample_bound(1024, 10, 0.5, 1e-12).unwrap() > base);
        assert!(gaussian_sample_bound(1024, 11, 0.5, 1e-9).unwrap() > base);
    }

    #[test]
    fn entropy_and_universal() {
        assert!((theta_entropy_half(2) - 1.0).abs() < 1e-15);
        assert!(matches!(universal_lower_bound(3, 2, 1.0), Err(Error::DegenerateTheta(1))));
        assert!(universal_lower_bound(22201, 69, 140.0).unwrap() >= 1);
    }

    #[test]
    fn selection_rule() {
        let s = q_selection(900, 5).unwrap();
        assert_eq!((s.q_devore, s.m_devore, s.q_array, s.m_array), (11, 121, 31, 186));
        let s = q_selection(22201, 69).unwrap();
        assert_eq!((s.m_array, s.m_devore), (10430, 19321));
    }

    #[test]
    fn report_row_matches_header() {
        let r = measurement_bounds(900, 5, BoundParams::default()).unwrap();
        assert_eq!(
            r.csv_row().split(',').count(),
            MeasurementBoundReport::CSV_HEADER.split(',').count()
        );
        assert!(r.m_moore <= r.m_array);
    }
}
