//! Exact nonnegative rational weights.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// A nonnegative exact rational number, always held in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(BigRational);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight {0} is negative")]
    Negative(String),
    #[error("weight has zero denominator")]
    ZeroDenominator,
    #[error("cannot parse weight `{0}`")]
    Malformed(String),
}

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    /// Builds `numer/denom`, reducing it.
    pub fn new(numer: i64, denom: i64) -> Result<Self, WeightError> {
        Self::from_bigints(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, WeightError> {
        if denom.is_zero() {
            return Err(WeightError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(numer, denom))
    }

    pub fn from_integer(n: u64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(value: BigRational) -> Result<Self, WeightError> {
        if value.is_negative() {
            return Err(WeightError::Negative(value.to_string()));
        }
        let (numer, denom) = value.into_raw();
        Ok(Weight(BigRational::new(numer, denom)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Nearest double to the exact value.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Exact division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Weight) -> Option<Weight> {
        if rhs.is_zero() {
            None
        } else {
            Some(Weight(&self.0 / &rhs.0))
        }
    }

    /// `1 - self`, or `None` if that would be negative.
    pub fn complement(&self) -> Option<Weight> {
        let c = BigRational::one() - &self.0;
        if c.is_negative() {
            None
        } else {
            Some(Weight(c))
        }
    }
}

impl Default for Weight {
    fn default() -> Self {
        Weight::zero()
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(&self.0 + &rhs.0)
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(&self.0 * &rhs.0)
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::zero(), |acc, w| acc + w)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        let mut acc = BigRational::zero();
        for w in iter {
            acc += &w.0;
        }
        Weight(acc)
    }
}

/// Canonical text form: `"0"`, an integer, or `"num/den"` in lowest terms.
impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Weight {
    type Err = WeightError;

    /// Accepts `n`, `n/d` and plain decimals such as `0.25` (read exactly).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || WeightError::Malformed(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| malformed())?;
            let d: BigInt = d.trim().parse().map_err(|_| malformed())?;
            if d.is_negative() {
                return Err(WeightError::Negative(s.to_string()));
            }
            return Self::from_bigints(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let digits = format!("{int_digits}{frac}");
            let mut numer: BigInt = digits.parse().map_err(|_| malformed())?;
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10u32), frac.len());
            return Self::from_bigints(numer, denom);
        }
        let n: BigInt = s.parse().map_err(|_| malformed())?;
        Self::from_bigints(n, BigInt::one())
    }
}
