//! Fair Bernoulli sums `B_n = β₁ + … + β_n` in arithmetic progressions `dℕ`:
//! exact values, the theta-function estimate and the Gaussian lattice sum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, ExperimentReport, Table};

/// Truncation threshold for the theta series.
pub const THETA_TERM_CUTOFF: f64 = 1e-18;
/// Half-width of the Gaussian window in units of `√n`.
pub const GAUSSIAN_WINDOW: f64 = 12.0;
/// Relative rounding allowance in the theta versus Gaussian comparison.
pub const COMPARISON_SLACK: f64 = 1e-9;

fn check_nd(n: u64, d: u64) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::range(format!("n = {n}, d = {d}: both must be positive")));
    }
    Ok(())
}

/// `cos(πk/d)` with `k` reduced mod `2d` first.
fn cos_pi_ratio(k: u64, d: u64) -> f64 {
    (PI * (k % (2 * d)) as f64 / d as f64).cos()
}

fn sin_pi_ratio(k: u64, d: u64) -> f64 {
    (PI * (k % (2 * d)) as f64 / d as f64).sin()
}

/// `P{B_n ≡ 0 mod d}` by the roots-of-unity filter
/// `(1/d) Σ_ℓ cos(πℓ/d)^n cos(πℓn/d)`.
pub fn prob_in_progression(n: u64, d: u64) -> Result<f64> {
    check_nd(n, d)?;
    if d == 1 {
        return Ok(1.0);
    }
    let exp = i32::try_from(n).map_err(|_| Error::range("n too large"))?;
    let sum: f64 = (0..d)
        .map(|l| cos_pi_ratio(l, d).powi(exp) * cos_pi_ratio(l * n, d))
        .sum();
    Ok(sum / d as f64)
}

/// Binomial point masses of `B_n`, advanced one row at a time.
#[derive(Debug, Clone)]
pub struct BinomialRows {
    row: Vec<f64>,
}

impl Default for BinomialRows {
    fn default() -> Self {
        Self::new()
    }
}

impl BinomialRows {
    pub fn new() -> Self {
        Self { row: vec![1.0] }
    }

    pub fn n(&self) -> u64 {
        self.row.len() as u64 - 1
    }

    pub fn advance(&mut self) {
        let mut next = vec![0.0; self.row.len() + 1];
        for (k, &p) in self.row.iter().enumerate() {
            next[k] += 0.5 * p;
            next[k + 1] += 0.5 * p;
        }
        self.row = next;
    }

    pub fn masses(&self) -> &[f64] {
        &self.row
    }

    /// `Σ_{k ≡ 0 mod d} P{B_n = k}`.
    pub fn progression_mass(&self, d: u64) -> f64 {
        self.row.iter().step_by(d as usize).sum()
    }
}

/// DP version of [`prob_in_progression`].
pub fn prob_in_progression_dp(n: u64, d: u64) -> Result<f64> {
    check_nd(n, d)?;
    let mut rows = BinomialRows::new();
    while rows.n() < n {
        rows.advance();
    }
    Ok(rows.progression_mass(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub d: u64,
    pub m: u64,
    pub value: f64,
    pub truncation_l: u64,
    /// Bound on the omitted terms `|ℓ| > L`.
    pub tail_bound: f64,
    /// Imaginary part of the truncated sum, discarded.
    pub imag_residue: f64,
}

/// `Θ(d, m) = Σ_ℓ e^{imπℓ/d − mπ²ℓ²/(2d²)}`, truncated symmetrically at the
/// first `L` with `e^{−mπ²L²/(2d²)} < 10⁻¹⁸`.
pub fn theta(d: u64, m: u64) -> Result<ThetaValue> {
    check_nd(m, d)?;
    let c = m as f64 * PI * PI / (2.0 * (d * d) as f64);
    let mut l = ((-THETA_TERM_CUTOFF.ln()) / c).sqrt().ceil().max(1.0) as u64;
    while (-c * (l * l) as f64).exp() >= THETA_TERM_CUTOFF {
        l += 1;
    }
    Ok(theta_truncated(d, m, l))
}

/// `Θ(d, m)` summed over `|ℓ| ≤ L`.
pub fn theta_truncated(d: u64, m: u64, l: u64) -> ThetaValue {
    let c = m as f64 * PI * PI / (2.0 * (d * d) as f64);
    let (mut re, mut im) = (1.0, 0.0);
    for j in 1..=l {
        let w = (-c * (j * j) as f64).exp();
        let k = (m % (2 * d)) * (j % (2 * d));
        re += 2.0 * w * cos_pi_ratio(k, d);
    }
    for j in -(l as i64)..=(l as i64) {
        let a = j.unsigned_abs();
        let w = (-c * (a * a) as f64).exp();
        let sn = sin_pi_ratio((m % (2 * d)) * (a % (2 * d)), d);
        im += if j < 0 { -w * sn } else { w * sn };
    }
    // for ℓ ≥ L+1 the ratio of consecutive weights is at most e^{−c(2L+3)}
    let first = (-c * ((l + 1) * (l + 1)) as f64).exp();
    let ratio = (-c * (2 * l + 3) as f64).exp();
    ThetaValue {
        d,
        m,
        value: re,
        truncation_l: l,
        tail_bound: 2.0 * first / (1.0 - ratio),
        imag_residue: im,
    }
}

/// `√(2/(πn)) Σ_{z ∈ dℤ} e^{−(2z−n)²/(2n)}` over `|2z − n| ≤ 12√n`.
pub fn gaussian_progression_sum(n: u64, d: u64) -> Result<f64> {
    check_nd(n, d)?;
    let nf = n as f64;
    let half = GAUSSIAN_WINDOW * nf.sqrt();
    let lo = ((nf - half) / 2.0).ceil() as i64;
    let hi = ((nf + half) / 2.0).floor() as i64;
    let di = d as i64;
    let first = lo.div_euclid(di) * di + if lo.rem_euclid(di) == 0 { 0 } else { di };
    let mut sum = 0.0;
    let mut z = first;
    while z <= hi {
        let x = (2 * z) as f64 - nf;
        sum += (-x * x / (2.0 * nf)).exp();
        z += di;
    }
    Ok((2.0 / (PI * nf)).sqrt() * sum)
}

/// Range of moduli per `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DRange {
    /// `2 ≤ d ≤ min(max, n)`.
    UpTo(u64),
    /// `2 ≤ d ≤ n`.
    Full,
}

impl DRange {
    pub fn upper(&self, n: u64) -> u64 {
        match self {
            DRange::UpTo(max) => (*max).min(n),
            DRange::Full => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: u64,
    pub e_theta: f64,
    pub e_gauss: f64,
    /// `e_theta · n^{3/2} / log^{5/2} n`.
    pub normalized: f64,
    /// `sup_d |Θ(d,n)/d − gaussian sum|`.
    pub poisson_gap: f64,
}

/// Per-`n` suprema over `d`, and the table of every `(n, d)` cell.
pub fn scaling_rows(d_range: DRange, n_grid: &[u64]) -> Result<(Vec<ScalingRow>, Table)> {
    let mut table = Table::new(&[
        "n",
        "d",
        "exact",
        "theta_over_d",
        "gaussian_sum",
        "err_theta",
        "err_gauss",
    ]);
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n < 2 {
            return Err(Error::range("every n in the grid must be at least 2"));
        }
        let (mut e_theta, mut e_gauss, mut gap) = (0.0f64, 0.0f64, 0.0f64);
        for d in 2..=d_range.upper(n) {
            let exact = prob_in_progression(n, d)?;
            let th = theta(d, n)?.value / d as f64;
            let gs = gaussian_progression_sum(n, d)?;
            let (et, eg) = ((exact - th).abs(), (exact - gs).abs());
            e_theta = e_theta.max(et);
            e_gauss = e_gauss.max(eg);
            gap = gap.max((th - gs).abs());
            table.push(vec![n as f64, d as f64, exact, th, gs, et, eg]);
        }
        let nf = n as f64;
        rows.push(ScalingRow {
            n,
            e_theta,
            e_gauss,
            normalized: e_theta * nf.powf(1.5) / nf.ln().powf(2.5),
            poisson_gap: gap,
        });
    }
    Ok((rows, table))
}

/// Least-squares slope of `ln e_theta` against `ln n`.
pub fn log_log_slope(rows: &[ScalingRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.e_theta > 0.0)
        .map(|r| ((r.n as f64).ln(), r.e_theta.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// `e_theta ≤ e_gauss` up to rounding: the two estimates agree by Poisson
/// summation except for terms far below `f64` resolution.
pub fn theta_not_worse(row: &ScalingRow) -> bool {
    row.e_theta <= row.e_gauss * (1.0 + COMPARISON_SLACK) + f64::EPSILON
}

/// Error-scaling study over `n_grid`.
///
/// Checks: the normalized ratio spread is at most 10, the log-log slope of
/// `e_theta` lies in `[−1.7, −1.3]`, and `e_theta ≤ e_gauss` at every `n`.
pub fn error_scaling_study(d_range: DRange, n_grid: &[u64]) -> Result<ExperimentReport> {
    if n_grid.is_empty() {
        return Err(Error::range("empty n grid"));
    }
    let (rows, table) = scaling_rows(d_range, n_grid)?;
    let norm: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    let lo = norm.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = norm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let slope = log_log_slope(&rows);
    let not_worse = rows.iter().filter(|r| theta_not_worse(r)).count();
    let range_desc = match d_range {
        DRange::UpTo(m) => format!("2 ≤ d ≤ min({m}, n)"),
        DRange::Full => "2 ≤ d ≤ n".to_string(),
    };
    let mut report = ExperimentReport::new("theta")
        .input("d_range", d_range)
        .input("n_grid", n_grid)
        .input("theta_term_cutoff", THETA_TERM_CUTOFF)
        .input("gaussian_window", GAUSSIAN_WINDOW)
        .output("e_theta", rows.iter().map(|r| r.e_theta).collect::<Vec<_>>())
        .output("e_gauss", rows.iter().map(|r| r.e_gauss).collect::<Vec<_>>())
        .output("normalized", &norm)
        .output("normalized_spread", spread)
        .output("slope", slope)
        .output(
            "poisson_gap",
            rows.iter().map(|r| r.poisson_gap).fold(0.0, f64::max),
        )
        .with_grid(format!("n ∈ {n_grid:?}, {range_desc}"));
    report.check(Check::flag("normalized_spread_at_most_10", spread, 10.0, spread <= 10.0));
    let s = slope.unwrap_or(f64::NAN);
    report.check(Check::flag(
        "slope_in_range",
        s,
        -1.5,
        (-1.7..=-1.3).contains(&s),
    ));
    report.check(Check::flag(
        "theta_not_worse_than_gaussian",
        not_worse as f64,
        rows.len() as f64,
        not_worse == rows.len(),
    ));
    Ok(report.with_table(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(n: u64, d: u64) -> f64 {
        let hits = (0u64..1 << n).filter(|b| (b.count_ones() as u64).is_multiple_of(d)).count();
        hits as f64 / (1u64 << n) as f64
    }

    #[test]
    fn filter_examples() {
        assert_eq!(prob_in_progression(7, 1).unwrap(), 1.0);
        for n in 1..=10 {
            assert!((prob_in_progression(n, 2).unwrap() - 0.5).abs() < 1e-15);
            assert_eq!(brute(n, 2), 0.5);
            for d in 3..6 {
                assert!((prob_in_progression(n, d).unwrap() - brute(n, d)).abs() < 1e-15);
            }
        }
        assert!((prob_in_progression(3, 3).unwrap() - 0.25).abs() < 1e-15);
        assert!(prob_in_progression(0, 3).is_err());
    }

    #[test]
    fn filter_matches_dp() {
        let mut rows = BinomialRows::new();
        for n in 1..=300u64 {
            rows.advance();
            for d in 1..=20 {
                let exact = prob_in_progression(n, d).unwrap();
                assert!((exact - rows.progression_mass(d)).abs() < 1e-12, "n={n} d={d}");
            }
        }
        assert!((prob_in_progression_dp(40, 7).unwrap() - prob_in_progression(40, 7).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn theta_examples() {
        let t = theta(1, 100).unwrap();
        assert_eq!(t.value, 1.0);
        for d in 2..=10 {
            for m in [10, 37, 100, 555, 1000] {
                let t = theta(d, m).unwrap();
                assert!(t.imag_residue.abs() < 1e-15);
                assert!(t.tail_bound < 1e-16);
                let wider = theta_truncated(d, m, t.truncation_l + 2);
                assert!((wider.value - t.value).abs() < 1e-15);
            }
        }
        let e100 = (theta(2, 100).unwrap().value / 2.0 - 0.5).abs();
        let e10 = (theta(2, 10).unwrap().value / 2.0 - 0.5).abs();
        assert!(e100 <= e10);
    }

    #[test]
    fn gaussian_sum_examples() {
        for n in [100, 400, 1001] {
            assert!((gaussian_progression_sum(n, 1).unwrap() - 1.0).abs() < 1e-6);
        }
        assert!((gaussian_progression_sum(100, 2).unwrap() - 0.5).abs() < 1e-3);
        // window is symmetric about n/2 when d | n
        let n = 90u64;
        let d = 3i64;
        let nf = n as f64;
        let left: f64 = (0..=45).filter(|z| z % d == 0).map(|z| (-((2 * z) as f64 - nf).powi(2) / (2.0 * nf)).exp()).sum();
        let right: f64 = (45..=90).filter(|z| z % d == 0).map(|z| (-((2 * z) as f64 - nf).powi(2) / (2.0 * nf)).exp()).sum();
        assert!((left - right).abs() < 1e-14);
    }

    #[test]
    fn poisson_gap_shrinks() {
        let gap = |n| (theta(5, n).unwrap().value / 5.0 - gaussian_progression_sum(n, 5).unwrap()).abs();
        assert!(gap(400) <= gap(50) + 1e-15);
        assert!(gap(400) < 1e-12);
    }

    #[test]
    fn small_study() {
        let r = error_scaling_study(DRange::Full, &[64, 128, 256]).unwrap();
        assert!(r.check_named("theta_not_worse_than_gaussian").unwrap().pass);
        let t = r.table.as_ref().unwrap();
        assert_eq!(t.columns[0], "n");
        assert_eq!(t.rows.len(), 63 + 127 + 255);
    }
}
