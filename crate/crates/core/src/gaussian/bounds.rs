use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::{BoundKind, BoundReport};
use super::{de_moivre_laplace, ln_binomial_pmf, mills_ratio_bounds};
use crate::diophantine::{count_solutions, ValueSet};
use crate::error::{Error, Result};
use crate::fourier::factor_modulus_sq;
use crate::model::WeightedBernoulliModel;
use crate::pmf::{exact_pmf_f64, LatticePmf};
use crate::quad::{periodic_trapezoid, simpson};

/// Parameters of the small-frequency window `|t| ≤ τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub delta: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub tau: f64,
    pub theta_inf: f64,
}

impl BoundParams {
    /// `τ = δ / (Σ(1−ϑ_j)k_j³)^{1/3}` with `0 < δ ≤ 1/(3π)`.
    pub fn new(model: &WeightedBernoulliModel, delta: f64, epsilon: f64, rho: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0 / (3.0 * PI)) {
            return Err(Error::range(format!("δ = {delta} is not in (0, 1/(3π)]")));
        }
        Self::unchecked_delta(model, delta, epsilon, rho)
    }

    /// The choice `δ = ν^{−ε}`. Only for very large `ν` does this fall
    /// below `1/(3π)`; see [`BoundParams::delta_admissible`].
    pub fn with_delta_from_nu(model: &WeightedBernoulliModel, epsilon: f64, rho: f64) -> Result<Self> {
        let delta = (model.len() as f64).powf(-epsilon);
        Self::unchecked_delta(model, delta, epsilon, rho)
    }

    fn unchecked_delta(
        model: &WeightedBernoulliModel,
        delta: f64,
        epsilon: f64,
        rho: f64,
    ) -> Result<Self> {
        if !(epsilon > 1.0 / 24.0 && epsilon < 1.0 / 6.0) {
            return Err(Error::range(format!("ε = {epsilon} is not in (1/24, 1/6)")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::range(format!("ρ = {rho} is not in (0, 1)")));
        }
        Ok(Self {
            delta,
            epsilon,
            rho,
            tau: delta / model.third_moment_sum().cbrt(),
            theta_inf: model.theta_inf(),
        })
    }

    pub fn delta_admissible(&self) -> bool {
        self.delta > 0.0 && self.delta <= 1.0 / (3.0 * PI)
    }
}

fn gaussian_point(mean: f64, variance: f64, m: f64) -> f64 {
    let z = m - mean;
    (-z * z / (2.0 * variance)).exp() / (TAU * variance).sqrt()
}

/// Records `|P{B = m} − G(m)|` against a fixed right side for every integer
/// `m` of the support, padded by `3√Var` on each side.
fn sweep_lattice(
    report: &mut BoundReport,
    model: &WeightedBernoulliModel,
    rhs: f64,
) -> Result<(LatticePmf<f64>, Vec<f64>, i64)> {
    let pmf = exact_pmf_f64(model)?;
    let mean = model.mean();
    let variance = model.variance();
    let pad = (3.0 * variance.sqrt()).ceil() as i64;
    let lo = pmf.offset() - pad;
    let hi = pmf.max_point() + pad;
    let mut lhs = Vec::with_capacity((hi - lo + 1) as usize);
    for m in lo..=hi {
        let diff = (pmf.mass_at(m) - gaussian_point(mean, variance, m as f64)).abs();
        report.record(vec![m as f64], diff, rhs);
        lhs.push(diff);
    }
    Ok((pmf, lhs, lo))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm31Report {
    pub nu: usize,
    pub k: u64,
    pub n: u64,
    pub params: BoundParams,
    pub delta_admissible: bool,
    pub rhs_scale: f64,
    pub lhs_at_n: f64,
    pub constant_at_n: f64,
    /// Sup over the lattice of `lhs / rhs_scale`.
    pub report: BoundReport,
}

/// Right side scale `(1/√Var)(ν^{1/6−4ε}/(ϑ^{1/3}ρ) + e^{−2π²ϑρ²δ²ν^{1/3}})`
/// for consecutive weights `k, …, k+ν−1`, and the empirical constant.
pub fn thm31_rhs(model: &WeightedBernoulliModel, params: &BoundParams, n: u64) -> Result<Thm31Report> {
    model.require_interior_probs()?;
    if !model.is_consecutive() {
        return Err(Error::Precondition("weights must be consecutive".into()));
    }
    let nu = model.len();
    if nu < 2 {
        return Err(Error::Precondition(format!("ν = {nu} is too small")));
    }
    let k = model.weights()[0];
    if k + nu as u64 > n {
        return Err(Error::Precondition(format!("k + ν = {} exceeds n = {n}", k + nu as u64)));
    }
    if (k as f64) < params.rho * n as f64 {
        return Err(Error::Precondition(format!("k = {k} is below ρn = {}", params.rho * n as f64)));
    }
    let nu_f = nu as f64;
    let theta = model.theta_inf();
    let variance = model.variance();
    let rhs_scale = (nu_f.powf(1.0 / 6.0 - 4.0 * params.epsilon) / (theta.cbrt() * params.rho)
        + (-2.0 * PI * PI * theta * params.rho.powi(2) * params.delta.powi(2) * nu_f.cbrt()).exp())
        / variance.sqrt();
    let mut report = BoundReport::new(
        "theorem-3.1",
        format!("consecutive weights {k}..{}, all lattice m", k + nu as u64 - 1),
        &["m"],
        BoundKind::EmpiricalConstant,
    );
    let (_, lhs, lo) = sweep_lattice(&mut report, model, rhs_scale)?;
    let lhs_at_n = lhs
        .get((n as i64 - lo) as usize)
        .copied()
        .unwrap_or_else(|| gaussian_point(model.mean(), variance, n as f64));
    Ok(Thm31Report {
        nu,
        k,
        n,
        params: *params,
        delta_admissible: params.delta_admissible(),
        rhs_scale,
        lhs_at_n,
        constant_at_n: lhs_at_n / rhs_scale,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm32Report {
    pub nu: usize,
    pub theta_sum: f64,
    pub sup_lhs: f64,
    pub empirical_constant: f64,
    pub n0: Option<i64>,
    /// `|P{B = n₀} − 1/√(2πVar)| · Σϑ_j(1−ϑ_j)` when `n₀` is an integer.
    pub centered_constant: Option<f64>,
    pub report: BoundReport,
}

/// `sup_n |P{B = n} − G(n)|` scaled by `Σϑ_j(1−ϑ_j)`.
pub fn thm32_check(model: &WeightedBernoulliModel) -> Result<Thm32Report> {
    model.require_interior_probs()?;
    let theta_sum = model.theta_sum();
    let mut report = BoundReport::new(
        "theorem-3.2",
        format!("ν = {}, all lattice n", model.len()),
        &["n"],
        BoundKind::EmpiricalConstant,
    );
    let (pmf, lhs, _) = sweep_lattice(&mut report, model, 1.0 / theta_sum)?;
    let sup_lhs = lhs.iter().copied().fold(0.0, f64::max);
    let mean = model.mean();
    let rounded = mean.round();
    let n0 = ((mean - rounded).abs() <= 1e-9 * mean.abs().max(1.0)).then_some(rounded as i64);
    let centered_constant = n0.map(|n0| {
        (pmf.mass_at(n0) - 1.0 / (TAU * model.variance()).sqrt()).abs() * theta_sum
    });
    Ok(Thm32Report {
        nu: model.len(),
        theta_sum,
        sup_lhs,
        empirical_constant: report.empirical_constant.unwrap_or(0.0),
        n0,
        centered_constant,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseReports {
    /// `|φ_j(t)| ≤ exp(−2pq sin²πtk_j)`.
    pub modulus: BoundReport,
    /// `|B(t)| ≤ C·q k_j³|t|³` where `q|sin πtk_j| ≤ 1/3`.
    pub expansion: BoundReport,
    /// `Σ sin²(πjt) ≥ (ν/4)min(1, (tν)²)` for consecutive weights.
    pub sine_sum: Option<BoundReport>,
}

/// Pointwise characteristic-function estimates at every summand and `t`.
pub fn lemma_pointwise_bounds(model: &WeightedBernoulliModel, t_grid: &[f64]) -> Result<PointwiseReports> {
    model.require_interior_probs()?;
    let grid = format!("{} summands × {} t-points", model.len(), t_grid.len());
    let mut modulus = BoundReport::new("lemma-3.3(i)", &grid, &["k", "t"], BoundKind::ConstantFree);
    let mut expansion =
        BoundReport::new("lemma-3.3(ii)", &grid, &["k", "t"], BoundKind::EmpiricalConstant);
    for (k, p) in model.iter() {
        let q = 1.0 - p;
        let kf = k as f64;
        for &t in t_grid {
            let s = (PI * t * kf).sin();
            let abs_phi = factor_modulus_sq(k, p, t).max(0.0).sqrt();
            modulus.record(vec![kf, t], abs_phi, (-2.0 * p * q * s * s).exp());

            let rhs = q * kf.powi(3) * t.abs().powi(3);
            if q * s.abs() > 1.0 / 3.0 || rhs == 0.0 {
                expansion.skip();
                continue;
            }
            let phi = Complex64::new(p, 0.0) + q * Complex64::cis(TAU * kf * t);
            let main = Complex64::new(-2.0 * PI * PI * p * q * kf * kf * t * t, TAU * q * kf * t);
            expansion.record(vec![kf, t], (phi.ln() - main).norm(), rhs);
        }
    }
    let sine_sum = (model.is_consecutive() && model.len() >= 2).then(|| {
        let mut r = BoundReport::new("lemma-3.6", &grid, &["m", "k", "t"], BoundKind::ConstantFree);
        sine_sum_points(&mut r, model.weights()[0], model.len() as u64, t_grid);
        r
    });
    Ok(PointwiseReports {
        modulus,
        expansion,
        sine_sum,
    })
}

fn sine_sum_points(report: &mut BoundReport, m: u64, k: u64, t_grid: &[f64]) {
    for &t in t_grid {
        if t.abs() > 0.5 {
            report.skip();
            continue;
        }
        let sum: f64 = (m..m + k).map(|j| (PI * j as f64 * t).sin().powi(2)).sum();
        let kf = k as f64;
        let floor = kf / 4.0 * (t * kf).powi(2).min(1.0);
        // a lower bound: recorded as floor ≤ sum
        report.record(vec![m as f64, kf, t], floor, sum);
    }
}

/// `t_points` equispaced points on `[−½, ½]`, endpoints included.
pub fn symmetric_grid(t_points: usize) -> Vec<f64> {
    let last = t_points.max(2) - 1;
    (0..=last).map(|i| -0.5 + i as f64 / last as f64).collect()
}

/// The sine-sum lower bound over `1 ≤ m ≤ m_max`, `2 ≤ k ≤ k_max`.
pub fn lemma36_sweep(m_max: u64, k_max: u64, t_points: usize) -> BoundReport {
    let ts = symmetric_grid(t_points);
    let mut report = BoundReport::new(
        "lemma-3.6",
        format!("m ∈ 1..={m_max}, k ∈ 2..={k_max}, {t_points} t-points on [−½, ½]"),
        &["m", "k", "t"],
        BoundKind::ConstantFree,
    );
    for m in 1..=m_max {
        for k in 2..=k_max {
            sine_sum_points(&mut report, m, k, &ts);
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReports {
    /// `∫_{τ<|t|≤½} |φ| ≤ e^{−ϑν³τ²/2}`.
    pub outer_integral: BoundReport,
    /// `∫₀¹ |φ| ≤ (φ(q)/c)^{2q} + e^{−(1−c)Σϑ_j(1−ϑ_j)}`.
    pub period_integral: BoundReport,
    pub phi_q: f64,
    pub nodes: usize,
}

fn abs_char_fn(model: &WeightedBernoulliModel, t: f64) -> f64 {
    model
        .iter()
        .map(|(k, z)| factor_modulus_sq(k, z, t).max(0.0).sqrt())
        .product()
}

/// Normalised `L^{2q}` norm `‖Σθ_j cos 2πtk_j‖_{2q} / Σθ_j`, with
/// `θ_j = ϑ_j(1−ϑ_j)`. The trapezoid rule is exact here.
pub fn normalised_cos_norm(model: &WeightedBernoulliModel, q: u32) -> f64 {
    let kmax = model.weights().iter().copied().max().unwrap_or(1) as usize;
    let nodes = 2 * q as usize * kmax + 1;
    let power = cos_sum_power(model, q, nodes);
    power.powf(1.0 / (2.0 * q as f64)) / model.theta_sum()
}

fn cos_sum_power(model: &WeightedBernoulliModel, q: u32, nodes: usize) -> f64 {
    periodic_trapezoid(
        |t| {
            model
                .iter()
                .map(|(k, z)| z * (1.0 - z) * (TAU * k as f64 * t).cos())
                .sum::<f64>()
                .powi(2 * q as i32)
        },
        nodes,
    )
}

/// Integrals of `|φ|` off the small-frequency window and over one period.
///
/// The outer-window estimate is evaluated for `ντ ≤ 1` only; larger `τ`
/// is counted as skipped.
pub fn lemma_tail_bounds(model: &WeightedBernoulliModel, tau: f64, q: u32, c: f64) -> Result<TailReports> {
    model.require_interior_probs()?;
    if q < 1 {
        return Err(Error::range("q must be at least 1"));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::range(format!("c = {c} is not in (0, 1]")));
    }
    if !(tau > 0.0) {
        return Err(Error::range(format!("τ = {tau} must be positive")));
    }
    let nodes = (40 * model.total_weight() as usize).max(2000);
    let nu = model.len() as f64;
    let grid = format!("ν = {}, τ = {tau}, q = {q}, c = {c}", model.len());

    let mut outer = BoundReport::new("lemma-3.5", &grid, &["tau"], BoundKind::ConstantFree);
    if !model.is_consecutive() || nu * tau > 1.0 && tau < 0.5 {
        outer.skip();
    } else {
        let rhs = (-model.theta_inf() * nu.powi(3) * tau * tau / 2.0).exp();
        let lhs = if tau >= 0.5 {
            0.0
        } else {
            2.0 * simpson(|t| abs_char_fn(model, t), tau, 0.5, nodes)
        };
        outer.record(vec![tau], lhs, rhs);
    }

    let mut period = BoundReport::new("lemma-3.8", &grid, &["q", "c"], BoundKind::ConstantFree);
    let lhs = periodic_trapezoid(|t| abs_char_fn(model, t), nodes);
    let phi_q = normalised_cos_norm(model, q);
    let rhs = (phi_q / c).powi(2 * q as i32) + (-(1.0 - c) * model.theta_sum()).exp();
    period.record(vec![q as f64, c], lhs, rhs);

    Ok(TailReports {
        outer_integral: outer,
        period_integral: period,
        phi_q,
        nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormCountComparison {
    pub nu: u64,
    pub q: u32,
    /// `‖Σ_{j≤ν} cos 2πtj‖_{2q}^{2q}`.
    pub norm_power: f64,
    /// `N_q({1..ν})` and `N_{2q}({1..ν})`.
    pub count_q: f64,
    pub count_2q: f64,
    pub ratio_to_count_q: f64,
    pub ratio_to_count_2q: f64,
}

/// Compares the `2q`-th power of the cosine-sum norm with the number of
/// solutions of `x₁+…+x_s = y₁+…+y_s` over `{1..ν}` for `s = q, 2q`.
pub fn remark_norm_vs_count(nu: u64, q: u32) -> Result<NormCountComparison> {
    if nu < 1 || q < 1 {
        return Err(Error::range("ν and q must be positive"));
    }
    let model = WeightedBernoulliModel::fair((1..=nu).collect())?;
    let nodes = 2 * q as usize * nu as usize + 1;
    // θ_j = ¼ for fair summands
    let norm_power = cos_sum_power(&model, q, nodes) * 4f64.powi(2 * q as i32);
    let set = ValueSet::new((1..=nu).collect())?;
    let count_q = count_solutions(&set, q as usize)?.log_count.exp();
    let count_2q = count_solutions(&set, 2 * q as usize)?.log_count.exp();
    Ok(NormCountComparison {
        nu,
        q,
        norm_power,
        count_q,
        count_2q,
        ratio_to_count_q: norm_power / count_q,
        ratio_to_count_2q: norm_power / count_2q,
    })
}

/// `|ln(exact/approx)|` against the returned bound for every admissible `k`.
pub fn de_moivre_sweep(ns: &[u64], ps: &[f64], gammas: &[f64]) -> Result<BoundReport> {
    let mut report = BoundReport::new(
        "de-moivre-laplace",
        format!("n ∈ {ns:?}, p ∈ {ps:?}, γ ∈ {gammas:?}, all k"),
        &["n", "p", "gamma", "k"],
        BoundKind::ConstantFree,
    );
    for &n in ns {
        for &p in ps {
            for &gamma in gammas {
                for k in 0..=n {
                    match de_moivre_laplace(n, p, k, gamma) {
                        Ok(d) => {
                            let lhs = (ln_binomial_pmf(n, p, k) - d.approx.ln()).abs();
                            report.record(vec![n as f64, p, gamma, k as f64], lhs, d.log_error_bound);
                        }
                        Err(Error::Precondition(_)) => report.skip(),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Both sides of the Mills-ratio sandwich on `points` equispaced `x ∈ [0, x_max]`.
pub fn mills_sweep(x_max: f64, points: usize) -> Result<BoundReport> {
    let mut report = BoundReport::new(
        "mills-ratio",
        format!("{points} points on [0, {x_max}]"),
        &["x", "side"],
        BoundKind::ConstantFree,
    );
    let last = points.max(2) - 1;
    for i in 0..=last {
        let x = x_max * i as f64 / last as f64;
        let b = mills_ratio_bounds(x)?;
        report.record(vec![x, 0.0], b.lower, b.value);
        report.record(vec![x, 1.0], b.value, b.upper);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fair_consecutive(first: u64, len: usize) -> WeightedBernoulliModel {
        WeightedBernoulliModel::consecutive(first, len, 0.5).unwrap()
    }

    #[test]
    fn tau_definition() {
        let m = fair_consecutive(1, 3);
        let p = BoundParams::new(&m, 0.1, 0.1, 0.5).unwrap();
        let s: f64 = [1.0f64, 8.0, 27.0].iter().map(|k| 0.5 * k).sum();
        assert!((p.tau - 0.1 / s.cbrt()).abs() < 1e-16);
        assert!(BoundParams::new(&m, 0.2, 0.1, 0.5).is_err());
        assert!(BoundParams::new(&m, 0.1, 0.2, 0.5).is_err());
        assert!(BoundParams::new(&m, 0.1, 0.1, 1.0).is_err());
    }

    #[test]
    fn thm31_example_and_degenerate() {
        let n = 200u64;
        let k = (0.3 * n as f64).ceil() as u64;
        let m = fair_consecutive(k, (n - k) as usize);
        let p = BoundParams::with_delta_from_nu(&m, 0.1, 0.3).unwrap();
        let r = thm31_rhs(&m, &p, n).unwrap();
        let c = r.report.empirical_constant.unwrap();
        assert!(c.is_finite() && c > 0.0);
        assert!(r.constant_at_n <= c);

        let single = fair_consecutive(100, 1);
        let p = BoundParams::with_delta_from_nu(&single, 0.1, 0.3).unwrap();
        assert!(thm31_rhs(&single, &p, 200).is_err());
    }

    #[test]
    fn thm32_centered_case() {
        let m = WeightedBernoulliModel::fair((1..=20).map(|j| 2 * j).collect()).unwrap();
        let r = thm32_check(&m).unwrap();
        assert_eq!(r.n0, Some(210));
        assert!(r.centered_constant.unwrap().is_finite());
        assert!(r.empirical_constant.is_finite());
        let odd = WeightedBernoulliModel::fair(vec![1, 2]).unwrap();
        assert_eq!(thm32_check(&odd).unwrap().n0, None);
    }

    #[test]
    fn pointwise_hand_values() {
        let m = fair_consecutive(1, 2);
        let r = lemma_pointwise_bounds(&m, &[0.0, 0.5]).unwrap();
        assert!(r.modulus.pass);
        let at0 = r.modulus.worst_point.as_ref().unwrap();
        assert_eq!(at0.margin, 0.0);
        let s = r.sine_sum.unwrap();
        assert!(s.pass);
        // t = ½: sin²(π/2) + sin²(π) = 1 against ½
        let mut only = BoundReport::new("x", "g", &["m", "k", "t"], BoundKind::ConstantFree);
        sine_sum_points(&mut only, 1, 2, &[0.5]);
        let pt = only.worst_point.unwrap();
        assert!((pt.rhs - 1.0).abs() < 1e-15 && pt.lhs == 0.5);
    }

    #[test]
    fn expansion_constant_is_finite() {
        let m = WeightedBernoulliModel::new(vec![1, 5, 17], vec![0.2, 0.5, 0.8]).unwrap();
        let r = lemma_pointwise_bounds(&m, &symmetric_grid(201)).unwrap();
        assert!(r.expansion.pass);
        assert!(r.expansion.skipped > 0);
        assert!(r.modulus.pass);
        assert!(r.sine_sum.is_none());
    }

    #[test]
    fn tail_examples() {
        let m = fair_consecutive(1, 20);
        let r = lemma_tail_bounds(&m, 0.05, 3, 0.9).unwrap();
        assert!(r.outer_integral.pass && r.outer_integral.evaluated == 1);
        assert!(r.period_integral.pass);
        let wide = lemma_tail_bounds(&m, 0.6, 3, 0.9).unwrap();
        assert_eq!(wide.outer_integral.worst_point.unwrap().lhs, 0.0);
        assert!(lemma_tail_bounds(&m, 0.05, 0, 0.9).is_err());
        assert!(lemma_tail_bounds(&m, 0.05, 2, 1.5).is_err());
    }

    #[test]
    fn small_sine_sweep() {
        let r = lemma36_sweep(5, 8, 101);
        assert!(r.pass);
        assert_eq!(r.evaluated, 5 * 7 * 101);
    }

    #[test]
    fn mills_grid() {
        assert!(mills_sweep(10.0, 200).unwrap().pass);
    }

    #[test]
    fn norm_power_by_expansion() {
        // ν = 1: ∫cos^{2q} = C(2q, q)/4^q
        let c = remark_norm_vs_count(1, 2).unwrap();
        assert!((c.norm_power - 6.0 / 16.0).abs() < 1e-14);
        assert!((c.count_q - 1.0).abs() < 1e-12);
    }
}
