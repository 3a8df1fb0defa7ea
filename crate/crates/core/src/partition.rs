//! Partitions into distinct parts `≥ m` through the tilted Bernoulli model
//! `P{X_j = j} = 1/(1 + e^{σj})`, `m ≤ j ≤ n`.

use std::f64::consts::{LN_10, TAU};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ext_from_f64, ext_from_u64, ExtFloat};
use crate::error::{Error, Result};
use crate::pmf::{convolve_bernoulli, DEFAULT_SUPPORT_BUDGET};
use crate::report::{Check, ExperimentReport, Table};

pub const MAX_EXACT_N: u64 = 100_000;
pub const MIN_IDENTITY_DIGITS: u32 = 50;
/// Relative agreement demanded between evaluations at different `σ`.
pub const CROSS_SIGMA_TOLERANCE: f64 = 1e-10;

/// Number of partitions of `n` into distinct parts, each at least `m`.
pub fn q_exact(m: u64, n: u64) -> Result<BigUint> {
    if m < 1 {
        return Err(Error::range("m must be at least 1"));
    }
    if n > MAX_EXACT_N {
        return Err(Error::SupportTooLarge {
            required: n as u128 + 1,
            budget: MAX_EXACT_N + 1,
        });
    }
    let n = n as usize;
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::from(1u32);
    for part in (m as usize)..=n {
        for s in (part..=n).rev() {
            let add = ways[s - part].clone();
            ways[s] += add;
        }
    }
    Ok(ways.swap_remove(n))
}

/// `1/(1 + e^x)` without overflow.
fn logistic_tail(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `ln(1 + e^{−x})` without overflow.
fn softplus_neg(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn model_mean(m: u64, n: u64, sigma: f64) -> f64 {
    (m..=n).map(|j| j as f64 * logistic_tail(sigma * j as f64)).sum()
}

fn model_variance(m: u64, n: u64, sigma: f64) -> f64 {
    (m..=n)
        .map(|j| {
            let p = logistic_tail(sigma * j as f64);
            (j as f64).powi(2) * p * (1.0 - p)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleSolution {
    pub sigma: f64,
    /// `Σ j/(1+e^{σj}) − n` at the returned `σ`.
    pub mean_check: f64,
    /// `B² = Var Y` at the returned `σ`.
    pub variance: f64,
}

/// The `σ` with `Σ_{j=m}^{n} j/(1+e^{σj}) = n`.
pub fn solve_sigma(m: u64, n: u64) -> Result<SaddleSolution> {
    if m < 1 {
        return Err(Error::range("m must be at least 1"));
    }
    let total: u64 = if m <= n { (m..=n).sum() } else { 0 };
    if n == 0 || n >= total {
        return Err(Error::NoSolution(format!(
            "n = {n} is not strictly between 0 and Σ_{{j={m}}}^{{{n}}} j = {total}"
        )));
    }
    let target = n as f64;
    let f = |s: f64| model_mean(m, n, s) - target;
    let finish = |sigma: f64| SaddleSolution {
        sigma,
        mean_check: f(sigma),
        variance: model_variance(m, n, sigma),
    };
    if 2 * n == total {
        return Ok(finish(0.0));
    }
    let tol = 1e-10 * target;
    // the mean decreases in σ
    let mut lo = -64.0 / m as f64;
    let mut hi = 64.0 / m as f64;
    while f(lo) <= 0.0 {
        lo *= 2.0;
    }
    while f(hi) >= 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..100 {
        let s = if fb != fa { b - fb * (b - a) / (fb - fa) } else { 0.5 * (lo + hi) };
        // keep the iterate inside the bracket
        let s = if s > lo && s < hi { s } else { 0.5 * (lo + hi) };
        let fs = f(s);
        if fs > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        (a, fa, b, fb) = (b, fb, s, fs);
        if fs.abs() <= tol {
            return Ok(finish(s));
        }
    }
    let best = if fa.abs() < fb.abs() { a } else { b };
    let sol = finish(best);
    if sol.mean_check.abs() <= tol {
        Ok(sol)
    } else {
        Err(Error::NoSolution(format!(
            "root finder stalled with residual {}",
            sol.mean_check
        )))
    }
}

/// Working precision for the identity at `σ`: `max(50, 30 + ⌈|σ|n/ln 10⌉)`.
pub fn identity_digits(n: u64, sigma: f64) -> u32 {
    let extra = (sigma.abs() * n as f64 / LN_10).ceil() as u32;
    (30 + extra).max(MIN_IDENTITY_DIGITS)
}

/// `q_m(n) = e^{σn} Π_{j=m}^{n}(1 + e^{−σj}) P{Y = n}`, which holds for every `σ`.
pub fn q_via_identity(m: u64, n: u64, sigma: f64) -> Result<ExtFloat> {
    if m < 1 {
        return Err(Error::range("m must be at least 1"));
    }
    if !sigma.is_finite() {
        return Err(Error::range(format!("σ = {sigma} is not finite")));
    }
    let digits = identity_digits(n, sigma);
    if m > n {
        // Y ≡ 0
        return Ok(ext_from_u64(u64::from(n == 0), digits));
    }
    let s = ext_from_f64(sigma, digits);
    let one = ext_from_u64(1, digits);
    let mut parts = Vec::with_capacity((n - m + 1) as usize);
    let mut norm = one.clone();
    for j in m..=n {
        let e_neg = (-(s.clone() * ext_from_u64(j, digits))).exp();
        let factor = one.clone() + e_neg;
        // P{X_j = 0} = 1/(1 + e^{−σj})
        parts.push((j, one.clone() / factor.clone()));
        norm *= factor;
    }
    let pmf = convolve_bernoulli(&parts, DEFAULT_SUPPORT_BUDGET)?;
    let tilt = (s * ext_from_u64(n, digits)).exp();
    Ok(tilt * norm * pmf.mass_at(n as i64))
}

pub fn ext_to_f64(x: &ExtFloat) -> f64 {
    x.to_f64().value()
}

/// The identity evaluated at every `σ`; fails if any two disagree by more
/// than [`CROSS_SIGMA_TOLERANCE`] relative.
pub fn q_via_identity_checked(m: u64, n: u64, sigmas: &[f64]) -> Result<Vec<f64>> {
    let values = sigmas
        .iter()
        .map(|&s| q_via_identity(m, n, s).map(|v| ext_to_f64(&v)))
        .collect::<Result<Vec<_>>>()?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = if hi == 0.0 { 0.0 } else { (hi - lo) / hi.abs() };
    if spread > CROSS_SIGMA_TOLERANCE {
        return Err(Error::PrecisionInsufficient(spread));
    }
    Ok(values)
}

fn biguint_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QEstimate {
    pub sigma: f64,
    pub estimate: f64,
    pub exact: f64,
    pub relative_error: f64,
}

/// Gaussian plug-in `e^{σn} Π(1 + e^{−σj}) / (B√(2π))` at the saddle `σ`.
pub fn q_estimate(m: u64, n: u64) -> Result<QEstimate> {
    let saddle = solve_sigma(m, n)?;
    let sigma = saddle.sigma;
    let ln_est = sigma * n as f64
        + (m..=n).map(|j| softplus_neg(sigma * j as f64)).sum::<f64>()
        - 0.5 * (TAU * saddle.variance).ln();
    let exact = q_exact(m, n)?;
    let ln_exact = biguint_ln(&exact);
    Ok(QEstimate {
        sigma,
        estimate: ln_est.exp(),
        exact: exact.to_f64().unwrap_or(f64::INFINITY),
        relative_error: (ln_est - ln_exact).exp_m1(),
    })
}

/// Exact count, the identity at the requested `σ`, and the plug-in estimate.
pub fn partition_report(m: u64, n: u64, sigma: Option<f64>) -> Result<ExperimentReport> {
    let exact = q_exact(m, n)?;
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    let saddle = solve_sigma(m, n).ok();
    let sigma = match (sigma, saddle) {
        (Some(s), _) => s,
        (None, Some(s)) => s.sigma,
        (None, None) => 0.0,
    };
    let identity = ext_to_f64(&q_via_identity(m, n, sigma)?);
    let estimate = q_estimate(m, n).ok();
    let mut t = Table::new(&["m", "n", "sigma", "q_exact", "q_identity", "q_estimate", "rel_error"]);
    t.push(vec![
        m as f64,
        n as f64,
        sigma,
        exact_f,
        identity,
        estimate.map_or(f64::NAN, |e| e.estimate),
        estimate.map_or(f64::NAN, |e| e.relative_error),
    ]);
    let mut report = ExperimentReport::new("partition")
        .input("m", m)
        .input("n", n)
        .input("sigma", sigma)
        .input("digits", identity_digits(n, sigma))
        .output("q_exact", exact.to_string())
        .output("q_identity", identity)
        .output("saddle", saddle)
        .output("estimate", estimate);
    let check = if exact.is_zero() {
        Check::abs("identity_matches_exact", identity, 0.0, 1e-10)
    } else {
        Check::rel("identity_matches_exact", identity, exact_f, 1e-10)
    };
    report.check(check);
    Ok(report.with_table(t))
}
