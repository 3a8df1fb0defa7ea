//! Gaussian local-limit approximants and their explicit error functionals.

mod bounds;
mod report;

pub use bounds::{
    de_moivre_sweep, lemma36_sweep, lemma_pointwise_bounds, lemma_tail_bounds, mills_sweep,
    normalised_cos_norm, remark_norm_vs_count, symmetric_grid, thm31_rhs, thm32_check, BoundParams, NormCountComparison,
    PointwiseReports, TailReports, Thm31Report, Thm32Report,
};
pub use report::{bounds_experiment, BoundKind, BoundPoint, BoundReport, ROUNDING_SLACK};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::WeightedBernoulliModel;
use crate::pmf::{exact_pmf_f64, maximal_span};
use crate::quad::gauss_legendre;
use crate::report::ExperimentReport;

/// Lattice Gaussian `D/√(2πΣ) · exp(−(N − M)²/(2Σ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianApprox {
    pub mean: f64,
    pub variance: f64,
    pub span: u64,
}

impl GaussianApprox {
    pub fn new(mean: f64, variance: f64, span: u64) -> Result<Self> {
        if !(variance > 0.0) || !variance.is_finite() {
            return Err(Error::range(format!("variance {variance} is not positive")));
        }
        if span == 0 {
            return Err(Error::range("span must be positive"));
        }
        Ok(Self {
            mean,
            variance,
            span,
        })
    }

    /// Moments of a weighted Bernoulli sum, unit span.
    pub fn of_model(model: &WeightedBernoulliModel) -> Result<Self> {
        Self::new(model.mean(), model.variance(), 1)
    }

    pub fn density(&self, n: f64) -> f64 {
        let z = n - self.mean;
        self.span as f64 / (TAU * self.variance).sqrt() * (-z * z / (2.0 * self.variance)).exp()
    }
}

pub fn llt_density(n: i64, approx: &GaussianApprox) -> f64 {
    approx.density(n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupError {
    pub delta: f64,
    pub argmax: i64,
    pub span: u64,
    pub mean: f64,
    pub variance: f64,
}

/// `Δ = sup_N |√Σ·P{S = N} − (D/√(2π)) e^{−(N−M)²/(2Σ)}|` over the lattice.
///
/// The sup runs over the support plus `3√Σ` beyond either end.
pub fn llt_sup_error(model: &WeightedBernoulliModel) -> Result<SupError> {
    let pmf = exact_pmf_f64(model)?;
    let variance = model.variance();
    if !(variance > 0.0) {
        return Err(Error::range("degenerate sum: variance is zero"));
    }
    let mean = model.mean();
    let span = maximal_span(&pmf);
    let sd = variance.sqrt();
    let pad = (3.0 * sd / span as f64).ceil() as i64;
    let d = span as i64;
    // maximal span may be coarser than the stored lattice step
    let base = pmf
        .iter()
        .find(|(_, m)| **m > 0.0)
        .map(|(n, _)| n)
        .unwrap_or(pmf.offset());
    let lo = base - pad * d;
    let hi = pmf.max_point() + pad * d;
    let mut best = SupError {
        delta: -1.0,
        argmax: lo,
        span,
        mean,
        variance,
    };
    let mut n = lo;
    while n <= hi {
        let z = n as f64 - mean;
        let gauss = span as f64 / TAU.sqrt() * (-z * z / (2.0 * variance)).exp();
        let diff = (sd * pmf.mass_at(n) - gauss).abs();
        if diff > best.delta {
            best.delta = diff;
            best.argmax = n;
        }
        n += d;
    }
    Ok(best)
}

/// `ln P{Bin(n, p) = k}` summed factor by factor.
pub fn ln_binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    assert!(k <= n);
    let k_small = k.min(n - k);
    let ln_choose: f64 = (1..=k_small)
        .map(|i| ((n - k_small + i) as f64 / i as f64).ln())
        .sum();
    ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeMoivre {
    /// `e^{−x²/2} / √(2πnpq)`.
    pub approx: f64,
    /// Bound on `|E|` where `P{S_n = k} = approx · e^E`.
    pub log_error_bound: f64,
    pub x: f64,
}

/// Gaussian value and explicit log-error bound for a binomial point mass.
///
/// Applies when `|x| ≤ β n^{1/6}` for some `β ≤ γ√(pq) n^{1/3}`, i.e. when
/// `|x| ≤ γ√(pqn)`.
pub fn de_moivre_laplace(n: u64, p: f64, k: u64, gamma: f64) -> Result<DeMoivre> {
    if n == 0 {
        return Err(Error::range("n must be positive"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::range(format!("p = {p} is not in (0, 1)")));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::range(format!("γ = {gamma} is not in (0, 1)")));
    }
    let q = 1.0 - p;
    let nf = n as f64;
    let npq = nf * p * q;
    let x = (k as f64 - nf * p) / npq.sqrt();
    let admissible = gamma * (p * q * nf).sqrt();
    if k > n || x.abs() > admissible {
        return Err(Error::Precondition(format!(
            "|x| = {:.6} exceeds γ√(pqn) = {admissible:.6}",
            x.abs()
        )));
    }
    let ax = x.abs();
    let bound = ax.powi(3) / npq.sqrt()
        + x.powi(4) / npq
        + ax.powi(3) / (2.0 * npq.powf(1.5))
        + 1.0 / (4.0 * nf * p.min(q) * (1.0 - gamma));
    Ok(DeMoivre {
        approx: (-x * x / 2.0).exp() / (TAU * npq).sqrt(),
        log_error_bound: bound,
        x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MillsBounds {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
}

/// Two-sided bounds on `R(x) = e^{x²/2} ∫_x^∞ e^{−t²/2} dt` together with
/// the value of `R` by quadrature.
pub fn mills_ratio_bounds(x: f64) -> Result<MillsBounds> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::range(format!("x = {x} must be a finite nonnegative real")));
    }
    let lower = PI / ((x * x + TAU).sqrt() + (PI - 1.0) * x);
    let upper = PI / (((PI - 2.0).powi(2) * x * x + TAU).sqrt() + 2.0 * x);
    Ok(MillsBounds {
        lower,
        upper,
        value: mills_ratio(x),
    })
}

/// `R(x) = ∫_0^∞ e^{−xs − s²/2} ds` (substituting `t = x + s`).
pub fn mills_ratio(x: f64) -> f64 {
    // the integrand is below e^{-s²/2} < 1e-300 past s = 38
    gauss_legendre(|s| (-x * s - 0.5 * s * s).exp(), 0.0, 40.0, 800)
}

/// `Δ` with its maximiser and the moments used.
pub fn sup_error_report(model: &WeightedBernoulliModel) -> Result<ExperimentReport> {
    let e = llt_sup_error(model)?;
    Ok(ExperimentReport::new("delta")
        .input("weights", model.weights())
        .input("theta", model.zero_probs())
        .output("delta", e.delta)
        .output("argmax", e.argmax)
        .output("span", e.span)
        .output("mean", e.mean)
        .output("variance", e.variance))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let g = GaussianApprox::new(0.0, 1.0, 1).unwrap();
        assert!((llt_density(0, &g) - 0.398_942_280_401_432_7).abs() < 1e-15);
        let g = GaussianApprox::new(3.0, 25.0, 1).unwrap();
        let expected = (-0.5f64).exp() / (50.0 * PI).sqrt();
        assert!((llt_density(8, &g) - expected).abs() < 1e-16);
        assert!((llt_density(8, &g) - 0.048_394).abs() < 1e-6);
        for c in 0..20 {
            assert_eq!(llt_density(3 + c, &g), llt_density(3 - c, &g));
        }
        assert!(GaussianApprox::new(0.0, 0.0, 1).is_err());
        assert!(GaussianApprox::new(0.0, -1.0, 1).is_err());
    }

    #[test]
    fn single_coin_sup_error_by_hand() {
        let m = WeightedBernoulliModel::fair(vec![1]).unwrap();
        let s = llt_sup_error(&m).unwrap();
        // N = 0: ½·½ − e^{−½}/√(2π)
        let at0 = (0.25 - (-0.5f64).exp() / TAU.sqrt()).abs();
        let at_minus1 = ((-4.5f64).exp() / TAU.sqrt()).abs();
        assert!(at0 > at_minus1);
        assert!((s.delta - at0).abs() < 1e-16);
        assert!(s.argmax == 0 || s.argmax == 1);
    }

    #[test]
    fn sup_error_scales_with_span() {
        let unit = llt_sup_error(&WeightedBernoulliModel::fair(vec![1; 40]).unwrap()).unwrap();
        let even = llt_sup_error(&WeightedBernoulliModel::fair(vec![2; 40]).unwrap()).unwrap();
        assert_eq!(even.span, 2);
        assert!((even.delta / 2.0 - unit.delta).abs() < 1e-14);
    }

    #[test]
    fn de_moivre_center() {
        let d = de_moivre_laplace(100, 0.5, 50, 0.5).unwrap();
        assert_eq!(d.x, 0.0);
        assert!((d.approx - 1.0 / (50.0 * PI).sqrt()).abs() < 1e-16);
        // x = 0 leaves only the constant term
        assert!((d.log_error_bound - 1.0 / (4.0 * 100.0 * 0.5 * 0.5)).abs() < 1e-16);
        let exact = ln_binomial_pmf(100, 0.5, 50).exp();
        assert!((exact - 0.079_589_2).abs() < 1e-7);
        assert!((exact / d.approx).ln().abs() <= d.log_error_bound);
    }

    #[test]
    fn de_moivre_precondition() {
        assert!(matches!(
            de_moivre_laplace(100, 0.5, 80, 0.5),
            Err(Error::Precondition(_))
        ));
        assert!(de_moivre_laplace(100, 0.0, 0, 0.5).is_err());
        assert!(de_moivre_laplace(100, 0.5, 50, 1.0).is_err());
    }

    #[test]
    fn mills_examples() {
        let b = mills_ratio_bounds(0.0).unwrap();
        let r0 = (PI / 2.0).sqrt();
        assert!((b.lower - r0).abs() < 1e-15);
        assert!((b.upper - r0).abs() < 1e-15);
        assert!((b.value - r0).abs() < 1e-14);
        let b1 = mills_ratio_bounds(1.0).unwrap();
        assert!((b1.value - 0.65568).abs() < 1e-5);
        assert!(b1.lower <= b1.value && b1.value <= b1.upper);
        assert!(mills_ratio(2.0) < mills_ratio(1.0));
        assert!(mills_ratio_bounds(-0.1).is_err());
    }
}
