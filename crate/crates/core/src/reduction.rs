//! Reduction of general Bernoulli summands to fair ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::{convolve_bernoulli, DEFAULT_SUPPORT_BUDGET};

/// Law of a composite variable equal in distribution to `Bernoulli(α)`,
/// built from an independent fair bit `ς`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecompositionSpec {
    /// `α = ½`: the variable is already fair.
    Fair,
    /// `α < ½`: `β = ε·ς` with `P{ε = 1} = 2α`.
    Thinned { eps_one: f64 },
    /// `α > ½`: `β = V + ε·ς` with the joint law of `(V, ε)` given by
    /// `joint[v][e] = P{(V, ε) = (v, e)}`.
    Paired { tau0: f64, joint: [[f64; 2]; 2] },
}

impl DecompositionSpec {
    /// `P{composite = 1}` by enumerating the joint outcomes with `ς`.
    pub fn reconstructed_success(&self) -> f64 {
        self.reconstructed_law()[1]
    }

    /// Law of the composite on `{0, 1, 2}`.
    pub fn reconstructed_law(&self) -> [f64; 3] {
        let joint = match *self {
            DecompositionSpec::Fair => [[0.0, 1.0], [0.0, 0.0]],
            DecompositionSpec::Thinned { eps_one } => [[1.0 - eps_one, eps_one], [0.0, 0.0]],
            DecompositionSpec::Paired { joint, .. } => joint,
        };
        let mut law = [0.0; 3];
        for (v, row) in joint.iter().enumerate() {
            for (e, p) in row.iter().enumerate() {
                for s in 0..2 {
                    law[v + e * s] += p * 0.5;
                }
            }
        }
        law
    }
}

pub fn decompose_bernoulli(alpha: f64, tau0: Option<f64>) -> Result<DecompositionSpec> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::range(format!("α = {alpha} is not in (0, 1)")));
    }
    if alpha == 0.5 {
        return Ok(DecompositionSpec::Fair);
    }
    if alpha < 0.5 {
        return Ok(DecompositionSpec::Thinned {
            eps_one: 2.0 * alpha,
        });
    }
    let limit = 2.0 * alpha.min(1.0 - alpha);
    let tau0 = tau0.ok_or_else(|| Error::range("α > ½ requires τ₀"))?;
    // 1 − α is inexact in binary; treat τ₀ within rounding of the limit as on it
    if !(tau0 > 0.0 && tau0 < limit - 4.0 * f64::EPSILON) {
        return Err(Error::range(format!("τ₀ = {tau0} is not in (0, {limit})")));
    }
    Ok(DecompositionSpec::Paired {
        tau0,
        joint: [[1.0 - alpha - tau0 / 2.0, tau0], [alpha - tau0 / 2.0, 0.0]],
    })
}

/// Right side of the fair conditioning identity
///
/// `P{Σ_{j≤n} k_j ς_j = b} = 2^{−m} Σ_h P{Σ_{j>m} k_j ς_j = b − h}`,
///
/// where `h` runs over the `2^m` subset sums of `k_1, …, k_m` with
/// multiplicity (the empty subset contributes `h = 0`).
pub fn fair_conditioning_sum(weights: &[u64], m: usize, b: i64) -> Result<BigRational> {
    if m > weights.len() {
        return Err(Error::range(format!(
            "m = {m} exceeds the {} available weights",
            weights.len()
        )));
    }
    if m > 24 {
        return Err(Error::range("subset enumeration limited to m ≤ 24"));
    }
    let half = BigRational::new(1.into(), 2.into());
    let tail = &weights[m..];
    let tail_pmf = if tail.is_empty() {
        None
    } else {
        let parts: Vec<_> = tail.iter().map(|&k| (k, half.clone())).collect();
        Some(convolve_bernoulli(&parts, DEFAULT_SUPPORT_BUDGET)?)
    };
    let mut acc = BigRational::zero();
    for mask in 0u32..(1 << m) {
        let h: i64 = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| weights[i] as i64)
            .sum();
        acc += match &tail_pmf {
            Some(p) => p.mass_at(b - h),
            None if b == h => BigRational::from_integer(1.into()),
            None => BigRational::zero(),
        };
    }
    Ok(acc / BigRational::from_integer(BigInt::from(1u64) << m))
}
