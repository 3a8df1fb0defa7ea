//! The Dickman function and the sum `D_n = Σ_{j≤n} jβ_j` with `P{β_j = 1} = 1/j`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WeightedBernoulliModel;
use crate::pmf::exact_pmf_f64;
use crate::report::{Check, ExperimentReport, Table};

/// Euler–Mascheroni constant to 30 digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082;

pub const DEFAULT_STEP: f64 = 1e-4;
pub const DEFAULT_U_MAX: f64 = 30.0;

/// `ρ` on the grid `u = i·h`, `0 ≤ u ≤ u_max`, marched through
/// `uρ(u) = ∫_{u−1}^{u} ρ(v) dv` with the trapezoid rule.
///
/// Each value is a positive average of earlier ones, so relative accuracy
/// survives far into the tail where `ρ` is tiny.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DickmanTable {
    step: f64,
    per_unit: usize,
    values: Vec<f64>,
    /// `∫₀^{i·h} ρ` by the trapezoid rule.
    cumulative: Vec<f64>,
}

impl DickmanTable {
    /// `1/h` must be an integer so the delayed term falls on the grid.
    pub fn new(step: f64, u_max: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.5) {
            return Err(Error::range(format!("step {step} is not in (0, ½]")));
        }
        let per_unit = (1.0 / step).round() as usize;
        if ((per_unit as f64) * step - 1.0).abs() > 1e-9 {
            return Err(Error::range(format!("1/h = {} is not an integer", 1.0 / step)));
        }
        if !(u_max >= 0.0) || !u_max.is_finite() {
            return Err(Error::range(format!("u_max = {u_max} is invalid")));
        }
        let h = 1.0 / per_unit as f64;
        let len = (u_max * per_unit as f64).ceil() as usize + 1;
        let n = per_unit;
        let mut values = vec![1.0; len];
        // interior trapezoid nodes of the window (u−1, u)
        let mut interior = (n - 1) as f64;
        for i in (n + 1)..len {
            if i % n == 0 {
                interior = values[i - n + 1..i].iter().sum();
            } else {
                interior += values[i - 1] - values[i - n];
            }
            let u = i as f64 * h;
            values[i] = h * (0.5 * values[i - n] + interior) / (u - 0.5 * h);
        }
        let mut cumulative = vec![0.0; len];
        for i in 1..len {
            cumulative[i] = cumulative[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
        }
        Ok(Self {
            step: h,
            per_unit,
            values,
            cumulative,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn locate(&self, u: f64) -> Result<(usize, f64)> {
        if !(u >= 0.0) {
            return Err(Error::range(format!("u = {u} is negative")));
        }
        let pos = u * self.per_unit as f64;
        let last = self.values.len() - 1;
        if pos > last as f64 + 1e-9 {
            return Err(Error::range(format!("u = {u} beyond table end {}", self.u_max())));
        }
        let i = (pos.floor() as usize).min(last.saturating_sub(1));
        Ok((i, (pos - i as f64).clamp(0.0, 1.0)))
    }

    /// `ρ(u)` by linear interpolation between grid values.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if (0.0..=1.0).contains(&u) {
            return Ok(1.0);
        }
        let (i, frac) = self.locate(u)?;
        Ok(self.values[i] + frac * (self.values[i + 1] - self.values[i]))
    }

    /// `∫₀^x ρ`.
    pub fn integral(&self, x: f64) -> Result<f64> {
        if (0.0..=1.0).contains(&x) {
            return Ok(x);
        }
        let (i, frac) = self.locate(x)?;
        let h = frac * self.step;
        let at = self.rho(x)?;
        Ok(self.cumulative[i] + 0.5 * h * (self.values[i] + at))
    }

    /// `∫₀^{u_max} ρ`.
    pub fn total_integral(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }
}

pub fn dickman_rho(u: f64, step: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::range(format!("u = {u} is negative")));
    }
    if u <= 1.0 {
        return Ok(1.0);
    }
    if u > DEFAULT_U_MAX {
        return Err(Error::range(format!("u = {u} beyond table end {DEFAULT_U_MAX}")));
    }
    DickmanTable::new(step, u)?.rho(u)
}

/// Weights `1..n`, `ϑ_j = 1 − 1/j`.
pub fn dickman_model(n: u64) -> Result<WeightedBernoulliModel> {
    if n < 1 {
        return Err(Error::range("n must be at least 1"));
    }
    WeightedBernoulliModel::new(
        (1..=n).collect(),
        (1..=n).map(|j| 1.0 - 1.0 / j as f64).collect(),
    )
}

fn cdf_errors(n: u64, xs: &[f64], table: &DickmanTable) -> Result<Vec<(f64, f64)>> {
    let pmf = exact_pmf_f64(&dickman_model(n)?)?;
    let mut prefix = Vec::with_capacity(pmf.len() + 1);
    prefix.push(0.0);
    for (_, m) in pmf.iter() {
        prefix.push(prefix.last().unwrap() + m);
    }
    let scale = (-EULER_GAMMA).exp();
    xs.iter()
        .map(|&x| {
            // P{D_n < nx}: every support point s with s < nx
            let bound = n as f64 * x;
            let below = (bound.ceil() as i64 - pmf.offset()).clamp(0, pmf.len() as i64) as usize;
            let cdf = prefix[below];
            let reference = scale * table.integral(x)?;
            Ok((cdf, reference))
        })
        .collect()
}

/// `P{D_n/n < x}` against `e^{−γ}∫₀^x ρ`, with the errors at `n/2` alongside.
pub fn cdf_check(n: u64, x_grid: &[f64]) -> Result<ExperimentReport> {
    if n < 2 {
        return Err(Error::range("n must be at least 2"));
    }
    if x_grid.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::range("x values must be positive"));
    }
    let x_top = x_grid.iter().copied().fold(1.0, f64::max).min(DEFAULT_U_MAX);
    let table = DickmanTable::new(DEFAULT_STEP, x_top.max(1.0))?;
    let clipped: Vec<f64> = x_grid.iter().map(|x| x.min(x_top)).collect();
    let full = cdf_errors(n, &clipped, &table)?;
    let half = cdf_errors(n / 2, &clipped, &table)?;
    let mut t = Table::new(&["x", "cdf", "reference", "error", "error_half_n"]);
    let mut dominated = true;
    for ((x, (cdf, reference)), (cdf_h, _)) in clipped.iter().zip(&full).zip(&half) {
        let err = (cdf - reference).abs();
        let err_h = (cdf_h - reference).abs();
        dominated &= err <= 1.2 * err_h;
        t.push(vec![*x, *cdf, *reference, err, err_h]);
    }
    let max_err = t.column("error").unwrap().into_iter().fold(0.0, f64::max);
    let mut report = ExperimentReport::new("dickman-cdf")
        .input("n", n)
        .input("x_grid", x_grid)
        .input("step", DEFAULT_STEP)
        .output("max_error", max_err)
        .with_grid(format!("n = {n} against n = {}", n / 2));
    report.check(Check::flag("error_not_above_1.2x_half_n", max_err, 0.0, dominated));
    Ok(report.with_table(t))
}

/// `n·P{D_n = round(nx)}` against `e^{−γ}ρ(x)`.
pub fn llt_check(n: u64, x: f64) -> Result<ExperimentReport> {
    if !(x > 0.0) {
        return Err(Error::range(format!("x = {x} must be positive")));
    }
    let k = (n as f64 * x).round() as i64;
    let top = (n * (n + 1) / 2) as i64;
    if k > top {
        return Err(Error::range(format!("round(nx) = {k} beyond the support end {top}")));
    }
    if x > DEFAULT_U_MAX {
        return Err(Error::range(format!("x = {x} beyond table end")));
    }
    let pmf = exact_pmf_f64(&dickman_model(n)?)?;
    let computed = n as f64 * pmf.mass_at(k);
    let reference = (-EULER_GAMMA).exp() * dickman_rho(x, DEFAULT_STEP)?;
    let error = (computed - reference).abs();
    let mut t = Table::new(&["n", "x", "computed", "reference", "error"]);
    t.push(vec![n as f64, x, computed, reference, error]);
    Ok(ExperimentReport::new("dickman-llt")
        .input("n", n)
        .input("x", x)
        .input("k", k)
        .output("computed", computed)
        .output("reference", reference)
        .output("error", error)
        .with_table(t))
}

/// `e^{−H_n}` and `P{Σ_j jZ_j = n}` with independent `Z_j ~ Poisson(1/j)`.
///
/// The probability is `e^{−H_n}` times the coefficient of `xⁿ` in
/// `Π_j exp(x^j/j)`; that coefficient is computed both in floating point
/// and as an exact rational.
pub fn poisson_cycle_identity(n: u64) -> Result<ExperimentReport> {
    if !(1..=60).contains(&n) {
        return Err(Error::range("n must lie in 1..=60"));
    }
    let nn = n as usize;
    let harmonic: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();

    let mut coeff = vec![0.0f64; nn + 1];
    coeff[0] = 1.0;
    for j in 1..=nn {
        // Poisson(1/j) masses at z = 0, 1, … with weight e^{−1/j}
        let lam = 1.0 / j as f64;
        let mut next = vec![0.0; nn + 1];
        for (s, &c) in coeff.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut term = (-lam).exp();
            let mut z = 0usize;
            while s + z * j <= nn {
                next[s + z * j] += c * term;
                z += 1;
                term *= lam / z as f64;
            }
        }
        coeff = next;
    }
    let lhs = coeff[nn];
    let reference = (-harmonic).exp();

    let mut exact = vec![BigRational::zero(); nn + 1];
    exact[0] = BigRational::one();
    for j in 1..=nn {
        let mut next = vec![BigRational::zero(); nn + 1];
        for s in 0..=nn {
            if exact[s].is_zero() {
                continue;
            }
            let mut term = BigRational::one();
            let mut z = 0usize;
            while s + z * j <= nn {
                next[s + z * j] += &exact[s] * &term;
                z += 1;
                term /= BigRational::from_integer(BigInt::from(j * z));
            }
        }
        exact = next;
    }
    let coefficient_is_one = exact[nn].is_one();

    let mut report = ExperimentReport::new("poisson-cycle")
        .input("n", n)
        .output("probability", lhs)
        .output("reference", reference)
        .output("rational_coefficient", exact[nn].to_string());
    report.check(Check::abs("probability_matches", lhs, reference, 1e-12));
    report.check(Check::flag(
        "rational_coefficient_is_one",
        if coefficient_is_one { 1.0 } else { 0.0 },
        1.0,
        coefficient_is_one,
    ));
    Ok(report)
}
