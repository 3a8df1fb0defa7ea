//! Solutions of `x₁+…+x_n = y₁+…+y_n` with all variables in a finite set.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::DEFAULT_SUPPORT_BUDGET;
use crate::quad::periodic_trapezoid;
use crate::report::{Check, ExperimentReport, Table};

/// A finite set of nonnegative integers, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueSet {
    values: Vec<u64>,
}

impl ValueSet {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidModel("value set is empty".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidModel("values must be strictly increasing".into()));
        }
        Ok(Self { values })
    }

    /// `{0, 1, …, P−1}`.
    pub fn range(p: u64) -> Result<Self> {
        Self::new((0..p).collect())
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn shifted(&self) -> Vec<usize> {
        let lo = self.values[0];
        self.values.iter().map(|v| (v - lo) as usize).collect()
    }

    fn width(&self) -> u64 {
        self.values[self.values.len() - 1] - self.values[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub n: usize,
    /// `ln N_n`.
    pub log_count: f64,
    /// `P{S_n = 0} = N_n / |𝒩|^{2n}`.
    pub p0: f64,
}

/// Law of `x₁+…+x_n` for uniform draws, one step at a time.
struct SumLaw {
    offsets: Vec<usize>,
    probs: Vec<f64>,
    n: usize,
}

impl SumLaw {
    fn new(set: &ValueSet) -> Self {
        Self {
            offsets: set.shifted(),
            probs: vec![1.0],
            n: 0,
        }
    }

    fn step(&mut self) {
        let w = *self.offsets.last().unwrap();
        let inv = 1.0 / self.offsets.len() as f64;
        let mut next = vec![0.0; self.probs.len() + w];
        for (s, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for &o in &self.offsets {
                next[s + o] += p * inv;
            }
        }
        self.probs = next;
        self.n += 1;
    }

    fn result(&self, set_size: usize) -> CountResult {
        let p0: f64 = self.probs.iter().map(|p| p * p).sum();
        CountResult {
            n: self.n,
            log_count: p0.ln() + 2.0 * self.n as f64 * (set_size as f64).ln(),
            p0,
        }
    }
}

fn check_budget(set: &ValueSet, n: usize) -> Result<()> {
    let required = n as u128 * set.width() as u128 + 1;
    if required > DEFAULT_SUPPORT_BUDGET as u128 {
        return Err(Error::SupportTooLarge {
            required,
            budget: DEFAULT_SUPPORT_BUDGET,
        });
    }
    Ok(())
}

/// `N_n(𝒩) = Σ_s c_n(s)²` with `c_n(s)` the number of `n`-tuples summing to
/// `s`, accumulated as probabilities and returned in log space.
pub fn count_solutions(set: &ValueSet, n: usize) -> Result<CountResult> {
    check_budget(set, n)?;
    let mut law = SumLaw::new(set);
    for _ in 0..n {
        law.step();
    }
    Ok(law.result(set.len()))
}

/// Exact `N_n(𝒩)` in big integers.
pub fn count_solutions_exact(set: &ValueSet, n: usize) -> Result<BigUint> {
    check_budget(set, n)?;
    let offsets = set.shifted();
    let w = *offsets.last().unwrap();
    let mut counts = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); counts.len() + w];
        for (s, c) in counts.iter().enumerate() {
            for &o in &offsets {
                next[s + o] += c;
            }
        }
        counts = next;
    }
    Ok(counts.iter().map(|c| c * c).sum())
}

/// `∫₀¹ |sin(Pπt) / (P sin πt)|^{2n} dt`, with the value 1 at integer `t`.
///
/// The integrand is a trigonometric polynomial of degree `n(P−1)`, so the
/// equispaced rule with `64Pn` nodes is exact up to rounding.
pub fn fejer_integral(p: u64, n: u64) -> Result<f64> {
    if p < 2 || n < 1 {
        return Err(Error::range("fejer_integral needs P ≥ 2 and n ≥ 1"));
    }
    let nodes = (64 * p * n) as usize;
    let pf = p as f64;
    Ok(periodic_trapezoid(
        |t| {
            if t == 0.0 {
                1.0
            } else {
                ((pf * PI * t).sin() / (pf * (PI * t).sin())).powi(2 * n as i32)
            }
        },
        nodes,
    ))
}

/// `√(3/π)`, the large-`P` limit of `N_n(P)√n / P^{2n−1}`.
pub fn sqrt_three_over_pi() -> f64 {
    (3.0 / PI).sqrt()
}

/// `P√(3/(π(P²−1)))`, the `n → ∞` limit of the ratio at fixed `P`.
pub fn fixed_p_limit(p: u64) -> f64 {
    let pf = p as f64;
    pf * (3.0 / (PI * (pf * pf - 1.0))).sqrt()
}

/// `r(n, P) = N_n(P)√n / P^{2n−1}` over a grid of `n`, for `𝒩 = {0..P−1}`.
///
/// Checks that every ratio lies in `[0.5, 1.5]`.
pub fn asymptotic_report(p: u64, n_grid: &[usize]) -> Result<ExperimentReport> {
    if p < 2 {
        return Err(Error::range("P must be at least 2"));
    }
    if n_grid.is_empty() {
        return Err(Error::range("empty n grid"));
    }
    let set = ValueSet::range(p)?;
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let n_max = *grid.last().unwrap();
    check_budget(&set, n_max)?;
    let reference = sqrt_three_over_pi();
    let mut table = Table::new(&["P", "n", "log_N", "ratio", "reference"]);
    let mut law = SumLaw::new(&set);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &n in &grid {
        while law.n < n {
            law.step();
        }
        let c = law.result(set.len());
        let nf = n as f64;
        let ratio = (c.log_count + 0.5 * nf.ln() - (2.0 * nf - 1.0) * (p as f64).ln()).exp();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        table.push(vec![p as f64, nf, c.log_count, ratio, reference]);
    }
    let mut report = ExperimentReport::new("diophantine")
        .input("P", p)
        .input("n_grid", &grid)
        .output("ratio_min", lo)
        .output("ratio_max", hi)
        .output("reference", reference)
        .output("fixed_p_limit", fixed_p_limit(p))
        .with_grid(format!("P = {p}, n ∈ {}..={n_max} ({} points)", grid[0], grid.len()));
    report.check(Check::flag("ratio_min_at_least_half", lo, 0.5, lo >= 0.5));
    report.check(Check::flag("ratio_max_at_most_three_halves", hi, 1.5, hi <= 1.5));
    Ok(report.with_table(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(set: &[u64], n: usize) -> u64 {
        let k = set.len();
        let total = k.pow(2 * n as u32);
        (0..total)
            .filter(|&code| {
                let mut c = code;
                let mut diff = 0i64;
                for i in 0..2 * n {
                    let v = set[c % k] as i64;
                    c /= k;
                    diff += if i < n { v } else { -v };
                }
                diff == 0
            })
            .count() as u64
    }

    #[test]
    fn small_counts() {
        for p in 2..6 {
            let set = ValueSet::range(p).unwrap();
            let c = count_solutions(&set, 1).unwrap();
            assert!((c.log_count.exp() - p as f64).abs() < 1e-12);
        }
        let two = ValueSet::range(2).unwrap();
        assert_eq!(count_solutions_exact(&two, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(brute(&[0, 1], 2), 6);
        let c = count_solutions(&two, 2).unwrap();
        assert!((c.p0 - 0.375).abs() < 1e-16);
    }

    #[test]
    fn exact_matches_brute_force() {
        for (set, n) in [(vec![0, 1, 2], 3), (vec![1, 4, 5], 2), (vec![0, 2, 3, 7], 2)] {
            let vs = ValueSet::new(set.clone()).unwrap();
            let exact = count_solutions_exact(&vs, n).unwrap();
            assert_eq!(exact, BigUint::from(brute(&set, n)));
            let approx = count_solutions(&vs, n).unwrap().log_count.exp();
            assert!((approx / brute(&set, n) as f64 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangular_law_cross_check() {
        // x − y has law u(k) = P − |k| on |k| < P, scaled by P²
        let p = 3i64;
        let n = 4;
        let mut law = vec![1.0f64];
        for _ in 0..n {
            let mut next = vec![0.0; law.len() + 2 * (p as usize - 1)];
            for (s, &v) in law.iter().enumerate() {
                for k in -(p - 1)..=(p - 1) {
                    next[(s as i64 + k + p - 1) as usize] += v * (p - k.abs()) as f64 / (p * p) as f64;
                }
            }
            law = next;
        }
        let p0 = law[law.len() / 2];
        let set = ValueSet::range(p as u64).unwrap();
        let c = count_solutions(&set, n).unwrap();
        assert!((c.p0 - p0).abs() < 1e-15);
        let exact = count_solutions_exact(&set, n).unwrap();
        assert!((p0 * 3f64.powi(8) - exact.to_string().parse::<f64>().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn fejer_examples() {
        assert!((fejer_integral(2, 2).unwrap() - 0.375).abs() < 1e-15);
        assert!((fejer_integral(2, 1).unwrap() - 0.5).abs() < 1e-15);
        let dp = count_solutions(&ValueSet::range(5).unwrap(), 10).unwrap().p0;
        assert!((fejer_integral(5, 10).unwrap() / dp - 1.0).abs() < 1e-9);
        assert!(fejer_integral(1, 3).is_err());
    }

    #[test]
    fn ratio_near_reference() {
        let r = asymptotic_report(3, &[300]).unwrap();
        let v = r.output_f64("ratio_max").unwrap();
        assert!((v / sqrt_three_over_pi() - 1.0).abs() < 0.1);
        assert!(r.pass);
    }

    #[test]
    fn fixed_p_limit_values() {
        assert!((fixed_p_limit(3) - (27.0 / (8.0 * PI)).sqrt()).abs() < 1e-15);
        assert!(fixed_p_limit(1000) > sqrt_three_over_pi());
    }
}
