//! Stereographic charts on the unit sphere of the finite-sequence space.
//!
//! For a pole `a` on the sphere, the `+` chart projects from `a` onto the
//! hyperplane `a^perp`:
//!
//! ```text
//! u+(x) = (x - <x,a> a) / (1 - <x,a>)          defined for x != a
//! u-(x) = (x - <x,a> a) / (1 + <x,a>)          defined for x != -a
//! ```
//!
//! `u-` is `u+` with the pole replaced by `-a`, so every formula below is
//! written once in terms of the *projection centre* `p = +-a`. The inverse is
//! `u^{-1}(y) = (2y + (<y,y> - 1) p) / (<y,y> + 1)`.
//!
//! Chart values live in `a^perp`, a subspace of ambient coordinates. To hand
//! them to a coordinate space `R^d` each chart carries a *frame*: the
//! Householder reflection `R` swapping `a` and `e_1`, followed by dropping
//! the (now zero) first coordinate. `R` is the identity for `a = e_1` and
//! differs from the identity only on `span(a, e_1)`, so the frame commutes
//! with zero padding and keeps rational data rational.

use std::fmt;

use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::glinf::GlInf;
use crate::scalar::{Scalar, DEFAULT_TOL};

/// Float-mode guard on `|1 -+ <x,a>|` near the excluded point.
pub const DOMAIN_GUARD: f64 = 1e-9;

/// A point of the unit sphere `<x, x> = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint<S> {
    coords: FinVec<S>,
}

impl<S: Scalar> SpherePoint<S> {
    /// Validates `<x,x> = 1`: exactly for rationals, within [`DEFAULT_TOL`] for floats.
    pub fn new(coords: FinVec<S>) -> Result<Self> {
        let n = coords.norm_sq();
        if !n.approx_eq(&S::one(), DEFAULT_TOL) {
            return Err(Error::NotOnSphere(n.to_string()));
        }
        Ok(SpherePoint { coords })
    }

    /// Normalizes a nonzero float vector onto the sphere.
    pub fn normalize(v: FinVec<f64>) -> Result<SpherePoint<f64>> {
        let norm = v.norm_sq().sqrt();
        if norm == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(SpherePoint { coords: v.scale(&(1.0 / norm)) })
    }

    pub fn basis(k: usize) -> Self {
        SpherePoint { coords: FinVec::basis(k) }
    }

    pub fn coords(&self) -> &FinVec<S> {
        &self.coords
    }

    pub fn into_coords(self) -> FinVec<S> {
        self.coords
    }

    pub fn antipode(&self) -> Self {
        SpherePoint { coords: self.coords.neg() }
    }

    /// Smallest `k` with the point on `S^k` (coordinates `1..=k+1`).
    pub fn first_level(&self) -> usize {
        self.coords.degree().saturating_sub(1).max(1)
    }

    pub fn to_f64(&self) -> SpherePoint<f64> {
        SpherePoint { coords: self.coords.to_f64() }
    }
}

impl<S: Scalar> fmt::Display for SpherePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coords.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StereoChart<S> {
    pole: SpherePoint<S>,
    sign: Sign,
    /// `pole - e_1`, the Householder vector of the frame.
    frame_axis: FinVec<S>,
    frame_norm_sq: S,
}

impl<S: Scalar> StereoChart<S> {
    pub fn new(pole: SpherePoint<S>, sign: Sign) -> Self {
        let frame_axis = pole.coords().sub(&FinVec::basis(1));
        let frame_norm_sq = frame_axis.norm_sq();
        StereoChart {
            pole,
            sign,
            frame_axis,
            frame_norm_sq,
        }
    }

    pub fn plus(pole: SpherePoint<S>) -> Self {
        Self::new(pole, Sign::Plus)
    }

    pub fn minus(pole: SpherePoint<S>) -> Self {
        Self::new(pole, Sign::Minus)
    }

    /// The chart with the same pole and the other sign.
    pub fn opposite(&self) -> Self {
        let sign = match self.sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        Self::new(self.pole.clone(), sign)
    }

    pub fn pole(&self) -> &SpherePoint<S> {
        &self.pole
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The point excluded from the chart domain (`a` for `+`, `-a` for `-`).
    pub fn centre(&self) -> FinVec<S> {
        match self.sign {
            Sign::Plus => self.pole.coords().clone(),
            Sign::Minus => self.pole.coords().neg(),
        }
    }

    /// `1 - <x, centre>`, the chart denominator; fails inside the guard.
    fn denominator(&self, x: &FinVec<S>, centre: &FinVec<S>) -> Result<S> {
        let d = S::one() - x.weak_inner(centre);
        let excluded = if S::EXACT { d.is_zero() } else { d.abs_f64() <= DOMAIN_GUARD };
        if excluded {
            return Err(Error::OutsideChartDomain(format!(
                "{x} is the excluded point of the {}-chart with pole {}",
                self.sign, self.pole
            )));
        }
        Ok(d)
    }

    /// The chart map `u` on the sphere.
    pub fn forward(&self, x: &SpherePoint<S>) -> Result<FinVec<S>> {
        self.forward_ambient(x.coords())
    }

    /// The chart formula evaluated at any ambient vector off the excluded
    /// hyperplane; agrees with [`forward`](Self::forward) on the sphere.
    pub fn forward_ambient(&self, x: &FinVec<S>) -> Result<FinVec<S>> {
        let c = self.centre();
        let d = self.denominator(x, &c)?;
        let num = x.sub(&c.scale(&x.weak_inner(&c)));
        num.div(&d)
    }

    fn check_perp(&self, y: &FinVec<S>) -> Result<()> {
        let ya = y.weak_inner(self.pole.coords());
        let ok = if S::EXACT {
            ya.is_zero()
        } else {
            ya.abs_f64() <= DEFAULT_TOL * y.max_abs().max(1.0)
        };
        if !ok {
            return Err(Error::NotInPerp(ya.to_string()));
        }
        Ok(())
    }

    /// The inverse chart `a^perp -> sphere`.
    pub fn inverse(&self, y: &FinVec<S>) -> Result<SpherePoint<S>> {
        self.check_perp(y)?;
        Ok(SpherePoint { coords: self.inverse_unchecked(y)? })
    }

    fn inverse_unchecked(&self, y: &FinVec<S>) -> Result<FinVec<S>> {
        let c = self.centre();
        let s = y.norm_sq();
        let num = y
            .scale(&S::from_i64(2))
            .add(&c.scale(&(s.clone() - S::one())));
        num.div(&(s + S::one()))
    }

    /// Change of chart `u_to . u_self^{-1}` on `a^perp` (ambient coordinates).
    pub fn transition(&self, to: &StereoChart<S>, y: &FinVec<S>) -> Result<FinVec<S>> {
        let x = self.inverse(y)?;
        to.forward(&x)
    }

    /// `du(x) v`, the differential of the chart formula.
    pub fn forward_diff(&self, x: &FinVec<S>, v: &FinVec<S>) -> Result<FinVec<S>> {
        let c = self.centre();
        let d = self.denominator(x, &c)?;
        let vc = v.weak_inner(&c);
        let xc = x.weak_inner(&c);
        let first = v.sub(&c.scale(&vc)).div(&d)?;
        let second = x.sub(&c.scale(&xc)).scale(&vc).div(&(d.clone() * d))?;
        Ok(first.add(&second))
    }

    /// `d(u^{-1})(y) w = 2w/(s+1) + 4<y,w>(p - y)/(s+1)^2`, `s = <y,y>`.
    pub fn inverse_diff(&self, y: &FinVec<S>, w: &FinVec<S>) -> Result<FinVec<S>> {
        let c = self.centre();
        let s1 = y.norm_sq() + S::one();
        let first = w.scale(&S::from_i64(2)).div(&s1)?;
        let coeff = S::from_i64(4) * y.weak_inner(w);
        let second = c.sub(y).scale(&coeff).div(&(s1.clone() * s1))?;
        Ok(first.add(&second))
    }

    /// Householder reflection `R` of the frame applied to `v`.
    fn reflect(&self, v: &FinVec<S>) -> FinVec<S> {
        if self.frame_axis.is_zero() {
            return v.clone();
        }
        let k = S::from_i64(2) * v.weak_inner(&self.frame_axis);
        let k = k.checked_div(&self.frame_norm_sq).expect("nonzero frame axis");
        v.sub(&self.frame_axis.scale(&k))
    }

    /// Frame coordinates of a vector of `a^perp`: drop slot 1 after `R`.
    pub fn to_coords(&self, y: &FinVec<S>) -> FinVec<S> {
        self.reflect(y).shift_down()
    }

    /// The vector of `a^perp` with frame coordinates `ybar`.
    pub fn from_coords(&self, ybar: &FinVec<S>) -> FinVec<S> {
        self.reflect(&ybar.shift_up())
    }

    /// The frame reflection as a group element (an involution).
    pub fn frame_matrix(&self) -> GlInf<S> {
        let n = self.frame_axis.degree().max(1);
        let rows = (1..=n)
            .map(|r| {
                let col_img = self.reflect(&FinVec::basis(r));
                (1..=n).map(|c| col_img.get(c)).collect()
            })
            .collect();
        // R is symmetric, so rows of the image matrix are its columns
        GlInf::from_block(rows).expect("reflections are invertible")
    }

    /// Smallest sphere level on which this chart is defined.
    pub fn min_level(&self) -> usize {
        self.pole.first_level()
    }

    pub fn to_f64(&self) -> StereoChart<f64> {
        StereoChart::new(self.pole.to_f64(), self.sign)
    }
}

impl<S: Scalar> fmt::Display for StereoChart<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign, self.pole)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    type V = FinVec<Rational>;
    type P = SpherePoint<Rational>;

    fn e(k: usize) -> P {
        P::basis(k)
    }

    #[test]
    fn sphere_point_validation() {
        assert!(P::new(V::from_i64s(&[1, 1])).is_err());
        let p = P::new(V::new(vec![q(3, 5), q(4, 5)])).unwrap();
        assert_eq!(p.first_level(), 1);
        assert_eq!(e(1).first_level(), 1);
        assert_eq!(e(4).first_level(), 3);
    }

    #[test]
    fn u_plus_examples() {
        let chart = StereoChart::plus(e(1));
        assert_eq!(chart.forward(&e(2)).unwrap(), V::basis(2));
        assert!(chart.forward(&e(1).antipode()).unwrap().is_zero());
        assert!(matches!(chart.forward(&e(1)), Err(Error::OutsideChartDomain(_))));
    }

    #[test]
    fn u_minus_examples() {
        let chart = StereoChart::minus(e(1));
        assert_eq!(chart.forward(&e(2)).unwrap(), V::basis(2));
        assert!(chart.forward(&e(1)).unwrap().is_zero());
        assert!(matches!(
            chart.forward(&e(1).antipode()),
            Err(Error::OutsideChartDomain(_))
        ));
    }

    #[test]
    fn u_plus_inverse_examples() {
        let chart = StereoChart::plus(e(1));
        assert_eq!(chart.inverse(&V::zero()).unwrap(), e(1).antipode());
        // closed form, then check by the forward formula
        let x = chart.inverse(&V::basis(2)).unwrap();
        assert_eq!(x, e(2));
        assert_eq!(chart.forward(&x).unwrap(), V::basis(2));
        assert!(matches!(chart.inverse(&V::basis(1)), Err(Error::NotInPerp(_))));
        // u- maps the centre to +a
        assert_eq!(StereoChart::minus(e(1)).inverse(&V::zero()).unwrap(), e(1));
    }

    #[test]
    fn antipodal_transition_is_inversion() {
        let a = StereoChart::plus(e(1));
        let b = StereoChart::minus(e(1));
        let y = V::new(vec![q(0, 1), q(2, 1)]);
        let got = a.transition(&b, &y).unwrap();
        let oracle = y.div(&y.norm_sq()).unwrap();
        assert_eq!(got, oracle);
        assert_eq!(got, V::new(vec![q(0, 1), q(1, 2)]));

        let unit = V::new(vec![q(0, 1), q(3, 5), q(4, 5)]);
        assert_eq!(a.transition(&b, &unit).unwrap(), unit);
        assert!(matches!(a.transition(&b, &V::zero()), Err(Error::OutsideChartDomain(_))));
    }

    #[test]
    fn frame_for_e1_is_shift() {
        let chart = StereoChart::plus(e(1));
        let y = V::from_i64s(&[0, 3, 4]);
        assert_eq!(chart.to_coords(&y), V::from_i64s(&[3, 4]));
        assert_eq!(chart.from_coords(&V::from_i64s(&[3, 4])), y);
        assert!(chart.frame_matrix().is_identity());
    }

    #[test]
    fn frame_maps_coordinates_into_perp() {
        let pole = P::new(V::new(vec![q(3, 5), q(0, 1), q(4, 5)])).unwrap();
        let chart = StereoChart::plus(pole.clone());
        for k in 1..=4 {
            let y = chart.from_coords(&V::basis(k));
            assert!(y.weak_inner(pole.coords()).is_zero());
            assert_eq!(chart.to_coords(&y), V::basis(k));
        }
        let r = chart.frame_matrix();
        assert!(r.compose(&r).is_identity());
    }

    #[test]
    fn differentials_at_reference_points() {
        // x = e2, v = e1 under u+ with pole e1: the chart-side image is e2
        let chart = StereoChart::plus(e(1));
        let d = chart.forward_diff(&V::basis(2), &V::basis(1)).unwrap();
        assert_eq!(d, V::basis(2));
        // d(u^{-1}) at the centre doubles
        let w = chart.inverse_diff(&V::zero(), &V::basis(2)).unwrap();
        assert_eq!(w, V::basis(2).scale(&q(2, 1)));
    }

    #[test]
    fn float_domain_guard() {
        let chart = StereoChart::<f64>::plus(SpherePoint::basis(1));
        let near = FinVec::new(vec![1.0 - 1e-12, 1e-6]);
        assert!(matches!(chart.forward_ambient(&near), Err(Error::OutsideChartDomain(_))));
    }
}
