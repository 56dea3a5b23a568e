//! Scalar types that can hold a probability: `f64`, or an exact rational.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational probabilities.
pub type Rational = Ratio<i128>;

const FLOAT_TOL: f64 = 1e-12;

pub trait Probability:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality up to representation error: exact for rationals, `1e-12` for floats.
    fn near(&self, other: &Self) -> bool;
}

impl Probability for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOL
    }
}

impl Probability for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }
}

pub fn half<P: Probability>() -> P {
    P::from_ratio(1, 2)
}

/// `(1 + c) / 2`, the agreement probability of a channel with correlation `c`.
pub fn agreement<P: Probability>(c: &P) -> P {
    (P::one() + c.clone()) * half::<P>()
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
