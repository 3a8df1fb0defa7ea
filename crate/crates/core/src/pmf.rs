//! Exact distribution of `Σ k_j β_j` by iterated convolution.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{ext_from_f64, f64_to_rational, ArithmeticMode, ExtFloat, Mass};
use crate::error::{Error, Result};
use crate::model::WeightedBernoulliModel;
use crate::report::{Check, ExperimentReport};

/// Largest number of lattice points an exact distribution may occupy.
pub const DEFAULT_SUPPORT_BUDGET: u64 = 50_000_000;

/// Probability masses on the lattice `offset + span·i`, `i = 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePmf<T = f64> {
    offset: i64,
    span: u64,
    masses: Vec<T>,
}

impl<T: Mass> LatticePmf<T> {
    /// Builds a pmf, trimming zero masses at both ends so the support is tight.
    pub fn new(offset: i64, span: u64, masses: Vec<T>) -> Result<Self> {
        if span == 0 {
            return Err(Error::range("span must be positive"));
        }
        let first = masses.iter().position(|m| !m.is_zero());
        let last = masses.iter().rposition(|m| !m.is_zero());
        let (Some(first), Some(last)) = (first, last) else {
            return Err(Error::InvalidModel("pmf has no positive mass".into()));
        };
        let masses = masses[first..=last].to_vec();
        Ok(Self {
            offset: offset + span as i64 * first as i64,
            span,
            masses,
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn span(&self) -> u64 {
        self.span
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Largest support point.
    pub fn max_point(&self) -> i64 {
        self.offset + self.span as i64 * (self.masses.len() as i64 - 1)
    }

    /// Mass at the integer `n`; zero off the lattice.
    pub fn mass_at(&self, n: i64) -> T {
        let d = n - self.offset;
        if d < 0 || d % self.span as i64 != 0 {
            return T::zero();
        }
        self.masses
            .get((d / self.span as i64) as usize)
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// `(point, mass)` pairs over the stored lattice range.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> + '_ {
        let (o, s) = (self.offset, self.span as i64);
        self.masses
            .iter()
            .enumerate()
            .map(move |(i, m)| (o + s * i as i64, m))
    }

    pub fn total(&self) -> T {
        self.masses
            .iter()
            .cloned()
            .fold(T::zero(), |acc, m| acc + m)
    }

    pub fn to_f64(&self) -> LatticePmf<f64> {
        LatticePmf {
            offset: self.offset,
            span: self.span,
            masses: self.masses.iter().map(Mass::to_f64).collect(),
        }
    }
}

impl LatticePmf<f64> {
    pub fn mean(&self) -> f64 {
        self.iter().map(|(n, m)| n as f64 * m).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Exact distribution in whichever arithmetic the caller asked for.
#[derive(Debug, Clone)]
pub enum Pmf {
    Float(LatticePmf<f64>),
    Rational(LatticePmf<BigRational>),
    Extended(LatticePmf<ExtFloat>),
}

impl Pmf {
    pub fn to_f64(&self) -> LatticePmf<f64> {
        match self {
            Pmf::Float(p) => p.clone(),
            Pmf::Rational(p) => p.to_f64(),
            Pmf::Extended(p) => p.to_f64(),
        }
    }
}

pub fn exact_pmf(model: &WeightedBernoulliModel, mode: ArithmeticMode) -> Result<Pmf> {
    mode.validate()?;
    Ok(match mode {
        ArithmeticMode::Float64 => Pmf::Float(exact_pmf_f64(model)?),
        ArithmeticMode::ExactRational => Pmf::Rational(exact_pmf_rational(model)?),
        ArithmeticMode::ExtendedPrecision { digits } => {
            Pmf::Extended(exact_pmf_extended(model, digits)?)
        }
    })
}

pub fn exact_pmf_f64(model: &WeightedBernoulliModel) -> Result<LatticePmf<f64>> {
    exact_pmf_with(model, |p| p, DEFAULT_SUPPORT_BUDGET)
}

/// Rational mode; each `ϑ_j` is taken at its exact binary value.
pub fn exact_pmf_rational(model: &WeightedBernoulliModel) -> Result<LatticePmf<BigRational>> {
    exact_pmf_with(model, f64_to_rational, DEFAULT_SUPPORT_BUDGET)
}

pub fn exact_pmf_extended(
    model: &WeightedBernoulliModel,
    digits: u32,
) -> Result<LatticePmf<ExtFloat>> {
    ArithmeticMode::extended(digits)?;
    exact_pmf_with(model, |p| ext_from_f64(p, digits), DEFAULT_SUPPORT_BUDGET)
}

/// Generic entry point: `convert` lifts each `ϑ_j` into the mass type.
pub fn exact_pmf_with<T: Mass>(
    model: &WeightedBernoulliModel,
    convert: impl Fn(f64) -> T,
    budget: u64,
) -> Result<LatticePmf<T>> {
    let parts: Vec<(u64, T)> = model.iter().map(|(k, t)| (k, convert(t))).collect();
    convolve_bernoulli(&parts, budget)
}

/// Lattice geometry of `Σ k_j β_j`: fixed offset, span of the variable
/// part and the number of lattice points in the support hull.
pub(crate) fn structural_lattice(weights_and_fixed: &[(u64, Option<bool>)]) -> (u64, u64, u128) {
    // Some(true): surely k_j; Some(false): surely 0; None: random.
    let mut offset = 0u64;
    let mut span = 0u64;
    let mut spread = 0u128;
    for &(k, fixed) in weights_and_fixed {
        match fixed {
            Some(true) => offset += k,
            Some(false) => {}
            None => {
                span = span.gcd(&k);
                spread += u128::from(k);
            }
        }
    }
    let span = span.max(1);
    (offset, span, spread / u128::from(span) + 1)
}

/// Convolves Bernoulli summands given as `(weight, zero probability)`.
///
/// Summands are processed smallest weight first on the reduced lattice.
pub fn convolve_bernoulli<T: Mass>(parts: &[(u64, T)], budget: u64) -> Result<LatticePmf<T>> {
    if parts.is_empty() {
        return Err(Error::InvalidModel("at least one summand is required".into()));
    }
    let classified: Vec<(u64, Option<bool>)> = parts
        .iter()
        .map(|(k, t)| {
            let fixed = if t.is_zero() {
                Some(true)
            } else if (T::one() - t.clone()).is_zero() {
                Some(false)
            } else {
                None
            };
            (*k, fixed)
        })
        .collect();
    let (offset, span, points) = structural_lattice(&classified);
    if points > u128::from(budget) {
        return Err(Error::SupportTooLarge {
            required: points,
            budget,
        });
    }

    let mut random: Vec<(u64, T)> = parts
        .iter()
        .zip(&classified)
        .filter(|(_, (_, fixed))| fixed.is_none())
        .map(|((k, t), _)| (k / span, t.clone()))
        .collect();
    random.sort_by_key(|(k, _)| *k);

    let mut masses = vec![T::zero(); points as usize];
    masses[0] = T::one();
    let mut top = 0usize;
    for (k, zero) in random {
        let k = k as usize;
        let one = T::one() - zero.clone();
        let new_top = top + k;
        for i in (0..=new_top).rev() {
            let stay = if i <= top {
                masses[i].clone() * zero.clone()
            } else {
                T::zero()
            };
            let moved = if i >= k && i - k <= top {
                masses[i - k].clone() * one.clone()
            } else {
                T::zero()
            };
            masses[i] = stay + moved;
        }
        top = new_top;
    }
    LatticePmf::new(offset as i64, span, masses)
}

/// Gnedenko span: gcd of the differences between support points.
///
/// A single-point support has span 1 by convention.
pub fn maximal_span<T: Mass>(pmf: &LatticePmf<T>) -> u64 {
    let mut points = pmf
        .masses()
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, _)| i as u64);
    let Some(first) = points.next() else {
        return 1;
    };
    let g = points.fold(0u64, |g, i| g.gcd(&(i - first)));
    if g == 0 {
        1
    } else {
        g * pmf.span()
    }
}

/// Masses, total and maximal span of the exact distribution.
pub fn pmf_report(model: &WeightedBernoulliModel, mode: ArithmeticMode) -> Result<ExperimentReport> {
    let pmf = exact_pmf(model, mode)?;
    let float = pmf.to_f64();
    let mut report = ExperimentReport::new("pmf")
        .input("weights", model.weights())
        .input("theta", model.zero_probs())
        .input("mode", mode)
        .output("offset", float.offset())
        .output("span", float.span())
        .output("maximal_span", maximal_span(&float))
        .output("masses", float.masses());
    match &pmf {
        Pmf::Rational(p) => {
            let total = p.total();
            let exact: Vec<String> = p.masses().iter().map(|m| m.to_string()).collect();
            report.set_output("masses_exact", exact);
            report.set_output("total", total.to_string());
            report.check(Check::flag(
                "total_is_one",
                float.total(),
                1.0,
                total == BigRational::from_integer(1.into()),
            ));
        }
        _ => {
            let total = float.total();
            report.set_output("total", total);
            report.check(Check::abs("total_is_one", total, 1.0, 1e-12));
        }
    }
    Ok(report)
}
