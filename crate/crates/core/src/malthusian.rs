//! The Malthusian parameter of the inverse-power reproduction process and the
//! limiting degree law it determines.
//!
//! The expected Laplace transform of the birth point process with holding
//! rates `(i + delta)^(-alpha)` is
//!
//! ```text
//! rho_hat(lambda) = sum_{n>=1} prod_{i=0}^{n-1} 1 / ((i + delta + 1)^alpha lambda + 1)
//! ```
//!
//! `lambda*` solves `rho_hat(lambda) = 1`. Series are truncated with a
//! certified geometric tail bound, so every reported value carries an error bar.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
/// Bracket expansion never leaves this interval.
pub const LAMBDA_MIN: f64 = 1e-12;
pub const LAMBDA_MAX: f64 = 1e12;
/// Hard cap on series terms; reached only for lambda near zero with small alpha.
pub const MAX_TERMS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoHatEval {
    /// Partial sum; underestimates the series by at most `tail_bound`.
    pub value: f64,
    pub truncation_depth: usize,
    pub tail_bound: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MalthusianResult {
    pub lambda_star: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPmf {
    /// `probabilities[k - 1]` is the limiting mass of degree `k`.
    pub probabilities: Vec<f64>,
    /// Mass beyond the truncation `K = probabilities.len()`, exact up to rounding.
    pub tail_mass: f64,
    pub alpha: f64,
    pub delta: f64,
    pub lambda_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfStats {
    /// `sum k p_k` including the certified correction for the truncated tail.
    pub mean: f64,
    /// Upper bound on the error of `mean` from truncation.
    pub mean_error_bound: f64,
    pub mode: u32,
    /// `P(X >= n + 1) / P(X >= n) = 1 / (1 + (n + delta)^alpha lambda*)` for `n = 1..=K`.
    pub tail_ratio_series: Vec<f64>,
}

fn check_shape(alpha: f64, delta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha = {alpha} must be positive")));
    }
    if !(delta.is_finite() && delta > -1.0) {
        return Err(Error::Parameter(format!("delta = {delta} must exceed -1")));
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn rho_hat(lambda: f64, alpha: f64, delta: f64, eps: f64) -> Result<RhoHatEval> {
    check_shape(alpha, delta)?;
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "rho_hat diverges for lambda = {lambda}; lambda must be positive and finite"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps = {eps} must be positive")));
    }
    let mut sum = CompensatedSum::default();
    let mut term = 1.0;
    let mut depth = 0usize;
    loop {
        // term_{depth+1} = term_depth / ((depth + delta + 1)^alpha lambda + 1)
        term /= (depth as f64 + delta + 1.0).powf(alpha) * lambda + 1.0;
        sum.add(term);
        depth += 1;
        // factors beyond depth are at most r, so the tail is at most term r / (1 - r)
        let r = 1.0 / ((depth as f64 + delta + 1.0).powf(alpha) * lambda + 1.0);
        let tail = term * r / (1.0 - r);
        if tail < eps {
            return Ok(RhoHatEval {
                value: sum.value(),
                truncation_depth: depth,
                tail_bound: tail,
                lambda,
                alpha,
                delta,
            });
        }
        if depth >= MAX_TERMS {
            return Err(Error::Domain(format!(
                "rho_hat({lambda}; {alpha}, {delta}) needs more than {MAX_TERMS} terms"
            )));
        }
    }
}

/// Solves `rho_hat(lambda) = 1` by bracketing from `lambda = 1` and bisecting
/// to floating-point resolution.
pub fn solve_lambda_star(alpha: f64, delta: f64, tol: f64) -> Result<MalthusianResult> {
    check_shape(alpha, delta)?;
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tol = {tol} must be positive")));
    }
    // truncation error well below tol so the residual reflects the root, not the series cut
    let eps = (tol / 1000.0).max(1e-17);
    let f = |lambda: f64| rho_hat(lambda, alpha, delta, eps).map(|r| r.value - 1.0);

    let (mut lo, mut hi) = (1.0, 1.0);
    let f1 = f(1.0)?;
    if f1 > 0.0 {
        while f(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > LAMBDA_MAX {
                return Err(Error::Solver(format!(
                    "no sign change of rho_hat - 1 below lambda = {LAMBDA_MAX}"
                )));
            }
        }
    } else {
        while f(lo)? <= 0.0 {
            hi = lo;
            lo /= 2.0;
            if lo < LAMBDA_MIN {
                return Err(Error::Solver(format!(
                    "no sign change of rho_hat - 1 above lambda = {LAMBDA_MIN}"
                )));
            }
        }
    }
    let bracket = (lo, hi);

    let mut iterations = 0;
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid > 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let (lambda_star, residual) =
        if f_lo.abs() <= f_hi.abs() { (lo, f_lo.abs()) } else { (hi, f_hi.abs()) };
    if !(residual <= tol) {
        return Err(Error::Solver(format!(
            "bisection ended with residual {residual:e} > tol {tol:e} at lambda = {lambda_star}"
        )));
    }
    Ok(MalthusianResult { lambda_star, residual, bracket, iterations })
}

/// One row of a parameter sweep; solver failures are kept per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub delta: f64,
    pub result: Result<MalthusianResult>,
}

/// Row-major over `alpha_grid` (outer) and `delta_grid` (inner).
pub fn lambda_star_sweep(alpha_grid: &[f64], delta_grid: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    if alpha_grid.is_empty() || delta_grid.is_empty() {
        return Err(Error::Parameter("sweep grids must be nonempty".into()));
    }
    Ok(alpha_grid
        .iter()
        .flat_map(|&alpha| delta_grid.iter().map(move |&delta| (alpha, delta)))
        .map(|(alpha, delta)| SweepRow { alpha, delta, result: solve_lambda_star(alpha, delta, tol) })
        .collect())
}

/// Limiting degree law
/// `p_k = x_k / (x_k + 1) * prod_{i<k} 1 / (x_i + 1)` with `x_i = (i + delta)^alpha lambda*`,
/// truncated once the remaining mass `prod_{i<=K} 1 / (x_i + 1)` drops below `eps`.
pub fn limit_degree_pmf(alpha: f64, delta: f64, eps: f64) -> Result<LimitPmf> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps = {eps} must be positive")));
    }
    let lambda_star = solve_lambda_star(alpha, delta, DEFAULT_TOL)?.lambda_star;
    Ok(limit_pmf_at(alpha, delta, lambda_star, eps))
}

/// [`limit_degree_pmf`] for a given `lambda`.
pub fn limit_pmf_at(alpha: f64, delta: f64, lambda_star: f64, eps: f64) -> LimitPmf {
    let mut probabilities = Vec::new();
    let mut tail = 1.0;
    let mut k = 1u32;
    while tail >= eps {
        let x = (f64::from(k) + delta).powf(alpha) * lambda_star;
        probabilities.push(x / (x + 1.0) * tail);
        tail /= x + 1.0;
        k += 1;
    }
    LimitPmf { probabilities, tail_mass: tail, alpha, delta, lambda_star }
}

impl LimitPmf {
    /// Mass of degree `k >= 1`; zero beyond the truncation.
    pub fn pk(&self, k: u32) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.probabilities.get(k as usize - 1).copied().unwrap_or(0.0)
    }

    pub fn truncation(&self) -> usize {
        self.probabilities.len()
    }

    /// `P(X >= n) = prod_{i=1}^{n-1} 1 / (1 + (i + delta)^alpha lambda*)`.
    pub fn tail_product(&self, n: u32) -> f64 {
        (1..n)
            .map(|i| 1.0 / (1.0 + (f64::from(i) + self.delta).powf(self.alpha) * self.lambda_star))
            .product()
    }

    fn tail_ratio(&self, n: u32) -> f64 {
        1.0 / (1.0 + (f64::from(n) + self.delta).powf(self.alpha) * self.lambda_star)
    }
}

pub fn pmf_stats(pmf: &LimitPmf) -> PmfStats {
    let big_k = pmf.truncation() as u32;
    let mut head = CompensatedSum::default();
    for (i, p) in pmf.probabilities.iter().enumerate() {
        head.add((i + 1) as f64 * p);
    }
    // sum_{k>K} k p_k = K P(X > K) + sum_{n>K} P(X >= n), and the latter is at
    // most P(X > K) / (1 - r) with r the tail ratio at K + 1.
    let r = pmf.tail_ratio(big_k + 1);
    let correction = f64::from(big_k) * pmf.tail_mass + pmf.tail_mass / (1.0 - r);
    let lower = f64::from(big_k) * pmf.tail_mass + pmf.tail_mass;
    let mode = pmf
        .probabilities
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
        .0 as u32
        + 1;
    PmfStats {
        mean: head.value() + correction,
        mean_error_bound: correction - lower,
        mode,
        tail_ratio_series: (1..=big_k).map(|n| pmf.tail_ratio(n)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_truncation() {
        // With eps huge the first term already certifies.
        let r = rho_hat(2.0, 0.5, 1.0, 1e3).unwrap();
        assert_eq!(r.truncation_depth, 1);
        assert!((r.value - 1.0 / (2f64.sqrt() * 2.0 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn closed_form_at_lambda_one() {
        // alpha = 1, delta = 0, lambda = 1: sum_n 1/(n+1)! = e - 2
        let r = rho_hat(1.0, 1.0, 0.0, 1e-15).unwrap();
        assert!((r.value - (std::f64::consts::E - 2.0)).abs() < 1e-14);
        assert!(r.tail_bound < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(rho_hat(0.0, 1.0, 0.0, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(rho_hat(-1.0, 1.0, 0.0, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(rho_hat(1.0, 1.0, -1.0, 1e-9), Err(Error::Parameter(_))));
        assert!(solve_lambda_star(0.0, 0.0, 1e-12).is_err());
    }

    #[test]
    fn solver_is_deterministic() {
        let a = solve_lambda_star(0.7, 0.3, 1e-12).unwrap();
        let b = solve_lambda_star(0.7, 0.3, 1e-12).unwrap();
        assert_eq!(a.lambda_star.to_bits(), b.lambda_star.to_bits());
        assert!(a.residual <= 1e-12);
        let fa = rho_hat(a.bracket.0, 0.7, 0.3, 1e-13).unwrap().value;
        let fb = rho_hat(a.bracket.1, 0.7, 0.3, 1e-13).unwrap().value;
        assert!(fa > 1.0 && fb < 1.0);
    }

    #[test]
    fn sweep_keeps_row_errors() {
        let rows = lambda_star_sweep(&[1.0, -1.0], &[0.0], 1e-12).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].result.is_ok());
        assert!(rows[1].result.is_err());
        assert!(lambda_star_sweep(&[], &[0.0], 1e-12).is_err());
        let single = lambda_star_sweep(&[0.5], &[1.0], 1e-12).unwrap();
        assert_eq!(single[0].result, solve_lambda_star(0.5, 1.0, 1e-12));
    }

    #[test]
    fn pmf_tail_identity_and_mass() {
        let pmf = limit_degree_pmf(0.6, 2.0, 1e-14).unwrap();
        for n in 1..pmf.truncation() as u32 {
            let tail: f64 = pmf.probabilities[n as usize - 1..].iter().sum::<f64>() + pmf.tail_mass;
            assert!((tail - pmf.tail_product(n)).abs() < 1e-12, "n = {n}");
        }
        let mass: f64 = pmf.probabilities.iter().sum();
        assert!((mass + pmf.tail_mass - 1.0).abs() < 1e-13);
        assert!(pmf.tail_mass < 1e-14);
    }
}
