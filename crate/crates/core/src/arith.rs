//! Arithmetic back-ends for exact distributions.
//!
//! Convolutions only ever add and multiply nonnegative masses, so every
//! back-end implements the small [`Mass`] trait and the same code path serves
//! binary floating point, exact rationals and extended-precision binary floats.

use std::ops::{Add, Mul, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extended-precision binary float; precision travels with the value.
pub type ExtFloat = FBig<HalfEven, 2>;

/// Smallest decimal precision accepted for the extended mode.
pub const MIN_EXTENDED_DIGITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum ArithmeticMode {
    /// IEEE-754 binary64.
    Float64,
    ExactRational,
    ExtendedPrecision { digits: u32 },
}

impl ArithmeticMode {
    pub fn extended(digits: u32) -> Result<Self> {
        let mode = ArithmeticMode::ExtendedPrecision { digits };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ArithmeticMode::ExtendedPrecision { digits } if digits < MIN_EXTENDED_DIGITS => {
                Err(Error::range(format!(
                    "extended precision needs at least {MIN_EXTENDED_DIGITS} digits, got {digits}"
                )))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArithmeticMode::Float64 => write!(f, "float64"),
            ArithmeticMode::ExactRational => write!(f, "exact-rational"),
            ArithmeticMode::ExtendedPrecision { digits } => write!(f, "extended({digits})"),
        }
    }
}

pub trait Mass: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Mass for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Mass for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Mass for ExtFloat {
    fn zero() -> Self {
        ExtFloat::ZERO
    }
    fn one() -> Self {
        ExtFloat::ONE
    }
    fn is_zero(&self) -> bool {
        self.repr().is_zero()
    }
    fn to_f64(&self) -> f64 {
        ExtFloat::to_f64(self).value()
    }
}

/// Binary digits carrying `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> usize {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize
}

/// Exact binary value of `x` at the requested precision.
pub fn ext_from_f64(x: f64, digits: u32) -> ExtFloat {
    ExtFloat::try_from(x)
        .expect("finite float")
        .with_precision(digits_to_bits(digits))
        .value()
}

pub fn ext_from_u64(x: u64, digits: u32) -> ExtFloat {
    ExtFloat::from(x).with_precision(digits_to_bits(digits)).value()
}

/// Exact rational value of a finite float (no decimal rounding).
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(x) {
        if v.is_finite() {
            return v;
        }
    }
    // numerator and denominator both overflow binary64: scale by bit lengths
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift >= 0 {
        x / BigRational::from_integer(BigInt::one() << shift as usize)
    } else {
        x * BigRational::from_integer(BigInt::one() << (-shift) as usize)
    };
    ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}
