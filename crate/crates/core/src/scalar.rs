//! The base field, in two interchangeable modes.
//!
//! Every algebraic object in this crate is generic over [`Scalar`]. Exact
//! rational arithmetic ([`Rational`]) is used whenever an identity must hold
//! on the nose; `f64` is used for chart numerics and finite differences.
//! Float comparisons always go through an explicit tolerance.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default tolerance for float-mode comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic is exact and equality is decidable.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;
    fn to_f64(&self) -> f64;

    /// Lossy conversion used to move exact data into float mode.
    fn from_f64_lossy(x: f64) -> Self;

    fn parse(s: &str) -> Result<Self>;

    /// Exact equality in exact mode, `|a - b| <= tol` in float mode.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(<BigRational as Zero>::zero)
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("`{s}` is not a rational number"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if Zero::is_zero(&d) {
                return Err(Error::DivisionByZero);
            }
            return Ok(BigRational::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            // finite decimal: read digits exactly
            let negative = int.trim_start().starts_with('-');
            let int_part: BigInt = match int.trim() {
                "" | "-" | "+" => BigInt::zero(),
                t => t.parse().map_err(|_| bad())?,
            };
            if !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part: BigInt = if frac.is_empty() {
                BigInt::zero()
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let mag = int_part.abs() * &scale + frac_part;
            let num = if negative { -mag } else { mag };
            return Ok(BigRational::new(num, scale));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }

    fn abs_f64(&self) -> f64 {
        Scalar::to_f64(&self.abs())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(num as f64 / den as f64)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            return n.checked_div(&d);
        }
        s.parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))
    }
}

/// Shorthand for building a rational from a small fraction.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den).expect("nonzero denominator")
}
