//! Characteristic function `E e^{2πitB}` and its inversion on one period.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::WeightedBernoulliModel;
use crate::pmf::exact_pmf_f64;
use crate::report::{Check, ExperimentReport};

pub fn char_fn(model: &WeightedBernoulliModel, t: f64) -> Complex64 {
    model
        .iter()
        .map(|(k, z)| z + (1.0 - z) * Complex64::cis(TAU * t * k as f64))
        .product()
}

/// `|φ_j(t)|² = 1 − 4ϑ_j(1 − ϑ_j) sin²(π t k_j)` for one summand.
pub fn factor_modulus_sq(weight: u64, zero_prob: f64, t: f64) -> f64 {
    let s = (std::f64::consts::PI * t * weight as f64).sin();
    1.0 - 4.0 * zero_prob * (1.0 - zero_prob) * s * s
}

/// Equispaced rule on one period of the characteristic function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub nodes: usize,
}

impl QuadratureSpec {
    /// `2Σk_j + 2` nodes: exact for a trigonometric polynomial of degree `Σk_j`.
    pub fn for_model(model: &WeightedBernoulliModel) -> Self {
        Self {
            nodes: 2 * model.total_weight() as usize + 2,
        }
    }

    pub fn required(model: &WeightedBernoulliModel) -> usize {
        2 * model.total_weight() as usize + 1
    }
}

/// Characteristic function sampled once, inverted at any lattice point.
#[derive(Debug, Clone)]
pub struct FourierInverter {
    samples: Vec<Complex64>,
    max_point: i64,
}

impl FourierInverter {
    pub fn new(model: &WeightedBernoulliModel, quad: QuadratureSpec) -> Result<Self> {
        let required = QuadratureSpec::required(model);
        if quad.nodes < required {
            return Err(Error::InsufficientNodes {
                nodes: quad.nodes,
                required,
            });
        }
        let m = quad.nodes as u64;
        let samples = (0..m)
            .map(|s| {
                model
                    .iter()
                    .map(|(k, z)| {
                        // reduce s·k mod M in integers before the trig call
                        let phase = ((s as u128 * k as u128) % m as u128) as f64 / m as f64;
                        z + (1.0 - z) * Complex64::cis(TAU * phase)
                    })
                    .product()
            })
            .collect();
        Ok(Self {
            samples,
            max_point: model.total_weight() as i64,
        })
    }

    /// `P{B = n}` by the inversion integral; zero outside `[0, Σk_j]`.
    pub fn mass(&self, n: i64) -> f64 {
        if n < 0 || n > self.max_point {
            return 0.0;
        }
        let m = self.samples.len() as u64;
        let nn = n as u64 % m;
        let sum: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(s, phi)| {
                let phase = ((s as u64 * nn) % m) as f64 / m as f64;
                (Complex64::cis(-TAU * phase) * phi).re
            })
            .sum();
        sum / m as f64
    }

    pub fn masses(&self) -> Vec<f64> {
        (0..=self.max_point).map(|n| self.mass(n)).collect()
    }
}

pub fn invert(model: &WeightedBernoulliModel, n: i64, quad: QuadratureSpec) -> Result<f64> {
    Ok(FourierInverter::new(model, quad)?.mass(n))
}

/// Every mass by inversion, compared with the convolution result.
pub fn inversion_report(model: &WeightedBernoulliModel, nodes: Option<usize>) -> Result<ExperimentReport> {
    let quad = nodes.map_or_else(|| QuadratureSpec::for_model(model), |nodes| QuadratureSpec { nodes });
    let inverted = FourierInverter::new(model, quad)?.masses();
    let exact = exact_pmf_f64(model)?;
    let max_diff = inverted
        .iter()
        .enumerate()
        .map(|(n, m)| (m - exact.mass_at(n as i64)).abs())
        .fold(0.0, f64::max);
    let mut report = ExperimentReport::new("invert")
        .input("weights", model.weights())
        .input("theta", model.zero_probs())
        .input("nodes", quad.nodes)
        .output("masses", &inverted)
        .output("max_abs_diff", max_diff);
    report.check(Check::abs("matches_convolution", max_diff, 0.0, 1e-10));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_fn_at_zero_and_half() {
        let m = WeightedBernoulliModel::new(vec![3, 5, 8], vec![0.2, 0.5, 0.9]).unwrap();
        let v = char_fn(&m, 0.0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let coin = WeightedBernoulliModel::fair(vec![1]).unwrap();
        assert!(char_fn(&coin, 0.5).norm() < 1e-16);
    }

    #[test]
    fn modulus_identity() {
        let m = WeightedBernoulliModel::new(vec![1, 4, 9], vec![0.3, 0.5, 0.8]).unwrap();
        for i in 0..500 {
            let t = -1.0 + i as f64 / 250.0;
            for (k, z) in m.iter() {
                let single = WeightedBernoulliModel::new(vec![k], vec![z]).unwrap();
                let lhs = char_fn(&single, t).norm_sqr();
                assert!((lhs - factor_modulus_sq(k, z, t)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn inversion_examples() {
        let two = WeightedBernoulliModel::fair(vec![1, 1]).unwrap();
        let q = QuadratureSpec::for_model(&two);
        assert!((invert(&two, 1, q).unwrap() - 0.5).abs() < 1e-15);

        let ten = WeightedBernoulliModel::fair(vec![1; 10]).unwrap();
        let q = QuadratureSpec::for_model(&ten);
        assert!((invert(&ten, 5, q).unwrap() - 63.0 / 256.0).abs() < 1e-14);
        assert!(invert(&ten, 11, q).unwrap().abs() < 1e-12);
        assert!(invert(&ten, -1, q).unwrap().abs() < 1e-12);
    }

    #[test]
    fn too_few_nodes() {
        let m = WeightedBernoulliModel::fair(vec![2, 3]).unwrap();
        let err = invert(&m, 1, QuadratureSpec { nodes: 10 }).unwrap_err();
        assert!(matches!(
            err,
            Error::InsufficientNodes {
                nodes: 10,
                required: 11
            }
        ));
        assert!(invert(&m, 1, QuadratureSpec { nodes: 11 }).is_ok());
    }
}
