use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Independent summands `β_j` taking the value `0` with probability
/// `zero_probs[j]` and `weights[j]` otherwise.
///
/// Endpoint probabilities `0` and `1` are accepted (a summand that is surely
/// `k_j` or surely `0`); the bound evaluators reject them separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedBernoulliModel {
    weights: Vec<u64>,
    zero_probs: Vec<f64>,
}

impl WeightedBernoulliModel {
    pub fn new(weights: Vec<u64>, zero_probs: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidModel("at least one summand is required".into()));
        }
        if weights.len() != zero_probs.len() {
            return Err(Error::InvalidModel(format!(
                "{} weights but {} probabilities",
                weights.len(),
                zero_probs.len()
            )));
        }
        if let Some(j) = weights.iter().position(|&k| k == 0) {
            return Err(Error::InvalidModel(format!("weight {j} is zero")));
        }
        if let Some(j) = zero_probs
            .iter()
            .position(|p| !p.is_finite() || *p < 0.0 || *p > 1.0)
        {
            return Err(Error::InvalidModel(format!(
                "zero probability {j} = {} is not in [0, 1]",
                zero_probs[j]
            )));
        }
        Ok(Self { weights, zero_probs })
    }

    /// Every summand equals `0` or `k_j` with probability one half.
    pub fn fair(weights: Vec<u64>) -> Result<Self> {
        let n = weights.len();
        Self::new(weights, vec![0.5; n])
    }

    pub fn with_common_zero_prob(weights: Vec<u64>, zero_prob: f64) -> Result<Self> {
        let n = weights.len();
        Self::new(weights, vec![zero_prob; n])
    }

    /// Consecutive weights `first, first + 1, …, first + len − 1`.
    pub fn consecutive(first: u64, len: usize, zero_prob: f64) -> Result<Self> {
        Self::with_common_zero_prob((first..first + len as u64).collect(), zero_prob)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn zero_probs(&self) -> &[f64] {
        &self.zero_probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.weights.iter().copied().zip(self.zero_probs.iter().copied())
    }

    /// `Σ k_j`, the largest value the sum can take.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// `P_ν = Σ (1 − ϑ_j)`.
    pub fn success_mass(&self) -> f64 {
        self.zero_probs.iter().map(|t| 1.0 - t).sum()
    }

    /// `M_ν = Σ (1 − ϑ_j) k_j`.
    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, t)| (1.0 - t) * k as f64).sum()
    }

    /// `Σ (1 − ϑ_j) ϑ_j k_j²`.
    pub fn variance(&self) -> f64 {
        self.iter()
            .map(|(k, t)| (1.0 - t) * t * (k as f64).powi(2))
            .sum()
    }

    /// `Σ (1 − ϑ_j) k_j³`, the normaliser of the small-frequency window.
    pub fn third_moment_sum(&self) -> f64 {
        self.iter()
            .map(|(k, t)| (1.0 - t) * (k as f64).powi(3))
            .sum()
    }

    /// `Σ ϑ_j (1 − ϑ_j)`.
    pub fn theta_sum(&self) -> f64 {
        self.zero_probs.iter().map(|t| t * (1.0 - t)).sum()
    }

    /// `inf_j ϑ_j (1 − ϑ_j)`.
    pub fn theta_inf(&self) -> f64 {
        self.zero_probs
            .iter()
            .map(|t| t * (1.0 - t))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn has_interior_probs(&self) -> bool {
        self.zero_probs.iter().all(|&t| t > 0.0 && t < 1.0)
    }

    pub(crate) fn require_interior_probs(&self) -> Result<()> {
        if self.has_interior_probs() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "zero probabilities must lie strictly inside (0, 1)".into(),
            ))
        }
    }

    /// Weights of the form `k, k + 1, …, k + ν − 1`.
    pub fn is_consecutive(&self) -> bool {
        self.weights.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_models() {
        assert!(WeightedBernoulliModel::new(vec![], vec![]).is_err());
        assert!(WeightedBernoulliModel::new(vec![1, 2], vec![0.5]).is_err());
        assert!(WeightedBernoulliModel::new(vec![0], vec![0.5]).is_err());
        assert!(WeightedBernoulliModel::new(vec![1], vec![1.5]).is_err());
        assert!(WeightedBernoulliModel::new(vec![1], vec![f64::NAN]).is_err());
        assert!(WeightedBernoulliModel::new(vec![1, 2], vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn derived_quantities() {
        let m = WeightedBernoulliModel::new(vec![1, 3], vec![0.25, 0.5]).unwrap();
        assert!((m.success_mass() - 1.25).abs() < 1e-15);
        assert!((m.mean() - (0.75 + 1.5)).abs() < 1e-15);
        assert!((m.variance() - (0.75 * 0.25 + 0.25 * 9.0)).abs() < 1e-15);
        assert!((m.theta_inf() - 0.1875).abs() < 1e-15);
        assert_eq!(m.total_weight(), 4);
        assert!(!m.is_consecutive());
        assert!(WeightedBernoulliModel::consecutive(5, 4, 0.5)
            .unwrap()
            .is_consecutive());
    }
}
