//! Finitely supported real sequences: the space of all finite sequences,
//! viewed as the direct limit of the coordinate spaces under zero padding.
//!
//! A [`FinVec`] stores the dense prefix of its coefficients with trailing
//! zeros trimmed. That canonical form is the equality witness, and it makes
//! the padding inclusion `R^i -> R^j` the identity on stored data.
//!
//! Positions are 1-based in the public API (`get(1)` is the first
//! coordinate), matching the usual `x_1, ..., x_n` notation.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FinVec<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> FinVec<S> {
    /// Builds the canonical form of `coeffs`.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        FinVec { coeffs }
    }

    pub fn zero() -> Self {
        FinVec { coeffs: Vec::new() }
    }

    /// The standard basis vector `e_k` (1-based).
    pub fn basis(k: usize) -> Self {
        assert!(k >= 1, "basis vectors are indexed from 1");
        let mut coeffs = vec![S::zero(); k];
        coeffs[k - 1] = S::one();
        FinVec { coeffs }
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| S::from_i64(v)).collect())
    }

    /// Length of the canonical coefficient list.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coordinate `k` (1-based); zero beyond the support.
    pub fn get(&self, k: usize) -> S {
        assert!(k >= 1, "coordinates are indexed from 1");
        self.coeffs.get(k - 1).cloned().unwrap_or_else(S::zero)
    }

    /// The first `n` coordinates, zero padded.
    pub fn padded(&self, n: usize) -> Vec<S> {
        let mut out: Vec<S> = self.coeffs.iter().take(n).cloned().collect();
        out.resize(n, S::zero());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree());
        let coeffs = (1..=n).map(|k| self.get(k) + other.get(k)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree());
        let coeffs = (1..=n).map(|k| self.get(k) - other.get(k)).collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        FinVec {
            coeffs: self.coeffs.iter().cloned().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|x| c.clone() * x.clone()).collect())
    }

    /// `self / c`, failing on a zero divisor.
    pub fn div(&self, c: &S) -> Result<Self> {
        let inv = S::one().checked_div(c)?;
        Ok(self.scale(&inv))
    }

    /// The weak inner product `sum_i x_i y_i`, a finite sum over the common support.
    pub fn weak_inner(&self, other: &Self) -> S {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self) -> S {
        self.weak_inner(self)
    }

    /// The padding inclusion into an ambient space of dimension `ambient`.
    ///
    /// On canonical forms this is the identity; it only validates that the
    /// vector actually lives in `R^ambient`.
    pub fn include(&self, ambient: usize) -> Result<Self> {
        if self.degree() > ambient {
            return Err(Error::AmbientTooSmall {
                degree: self.degree(),
                ambient,
            });
        }
        Ok(self.clone())
    }

    /// Drops the first coordinate and shifts the rest down by one.
    pub fn shift_down(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).cloned().collect())
    }

    /// Prepends a zero coordinate.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.degree() + 1);
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        FinVec { coeffs }
    }

    /// Keeps only the first `n` coordinates.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Max absolute coordinate difference, in `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.degree().max(other.degree());
        (1..=n)
            .map(|k| (self.get(k) - other.get(k)).abs_f64())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// Canonical equality in exact mode; coordinatewise `tol` in float mode.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if S::EXACT {
            self == other
        } else {
            self.max_abs_diff(other) <= tol
        }
    }

    pub fn to_f64(&self) -> FinVec<f64> {
        FinVec::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FinVec<T> {
        FinVec::new(self.coeffs.iter().map(f).collect())
    }

    /// Parses a comma-separated coefficient list, e.g. `1,0,-3/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self::zero());
        }
        s.split(',').map(S::parse).collect::<Result<Vec<_>>>().map(Self::new)
    }
}

impl<S: Scalar> Default for FinVec<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> fmt::Display for FinVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    type V = FinVec<Rational>;

    #[test]
    fn make_strips_trailing_zeros() {
        let v = V::from_i64s(&[1, 0, 0]);
        assert_eq!(v.degree(), 1);
        assert_eq!(v, V::from_i64s(&[1]));
        assert_eq!(V::new(vec![]).degree(), 0);
        let w = V::from_i64s(&[0, 2]);
        assert_eq!(w.degree(), 2);
        assert_eq!(w.coeffs(), &[q(0, 1), q(2, 1)]);
    }

    #[test]
    fn add_and_scale() {
        let x = V::from_i64s(&[1, 2]);
        assert_eq!(x.add(&V::from_i64s(&[0, 0, 3])), V::from_i64s(&[1, 2, 3]));
        assert!(x.add(&V::from_i64s(&[-1, -2])).is_zero());
        assert!(V::from_i64s(&[5, 7]).scale(&q(0, 1)).is_zero());
    }

    #[test]
    fn weak_inner_examples() {
        let x = V::from_i64s(&[1, 2, 3]);
        assert_eq!(x.weak_inner(&V::from_i64s(&[4, 5])), q(14, 1));
        assert_eq!(x.weak_inner(&V::zero()), q(0, 1));
        let e3 = V::basis(3);
        assert_eq!(e3.weak_inner(&e3), q(1, 1));
    }

    #[test]
    fn include_is_identity_or_rejects() {
        let x = V::from_i64s(&[1, 2]);
        assert_eq!(x.include(4).unwrap(), x);
        assert_eq!(x.include(2).unwrap(), x);
        assert_eq!(
            V::from_i64s(&[1, 2, 3]).include(2),
            Err(Error::AmbientTooSmall {
                degree: 3,
                ambient: 2
            })
        );
    }

    #[test]
    fn shifts_round_trip() {
        let x = V::from_i64s(&[0, 4, 0, 5]);
        assert_eq!(x.shift_down(), V::from_i64s(&[4, 0, 5]));
        assert_eq!(x.shift_down().shift_up(), x);
        assert!(V::zero().shift_up().is_zero());
    }

    #[test]
    fn parse_and_display() {
        let v = V::parse("1, -3/2, 0").unwrap();
        assert_eq!(v.degree(), 2);
        assert_eq!(v.to_string(), "(1, -3/2)");
        assert!(V::parse("").unwrap().is_zero());
        assert!(V::parse("()").unwrap().is_zero());
    }

    #[test]
    fn float_comparisons_take_a_tolerance() {
        let a = FinVec::<f64>::new(vec![1.0, 2.0]);
        let b = FinVec::<f64>::new(vec![1.0 + 1e-12, 2.0]);
        assert!(a.approx_eq(&b, 1e-9));
        assert!(!a.approx_eq(&b, 1e-13));
    }
}
