use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::scalar::{Scalar, DEFAULT_TOL};

use super::stereo::{Sign, SpherePoint, StereoChart, DOMAIN_GUARD};
use super::ManifoldTower;

/// The tower `S^1 -> S^2 -> ... -> S^max_level` under coordinate inclusion.
///
/// `S^i` sits in the first `i + 1` ambient coordinates, so `d_i = i`. Chart
/// families are stereographic charts; the default family for a base point
/// uses the pole `e_1`, with sign `+` unless the point is (numerically) `e_1`.
#[derive(Clone, Debug)]
pub struct SphereTower {
    max_level: usize,
}

impl SphereTower {
    pub fn new(max_level: usize) -> Self {
        assert!(max_level >= 2, "the sphere tower needs at least two levels");
        SphereTower { max_level }
    }

    fn check_chart_level<S: Scalar>(&self, chart: &StereoChart<S>, level: usize) -> Result<()> {
        ManifoldTower::<S>::check_level(self, level)?;
        if level < chart.min_level() {
            return Err(Error::OutsideChartDomain(format!(
                "chart {chart} is not defined on S^{level}"
            )));
        }
        Ok(())
    }

    fn point_at<S: Scalar>(&self, level: usize, p: &FinVec<S>) -> Result<SpherePoint<S>> {
        p.include(level + 1)?;
        SpherePoint::new(p.clone())
    }
}

impl<S: Scalar> ManifoldTower<S> for SphereTower {
    type Chart = StereoChart<S>;

    fn name(&self) -> &str {
        "sphere"
    }

    fn max_level(&self) -> usize {
        self.max_level
    }

    fn dim(&self, level: usize) -> usize {
        level
    }

    fn ambient_dim(&self, level: usize) -> usize {
        level + 1
    }

    fn contains(&self, level: usize, p: &FinVec<S>) -> bool {
        p.degree() <= level + 1 && p.norm_sq().approx_eq(&S::one(), DEFAULT_TOL)
    }

    fn first_level(&self, p: &FinVec<S>) -> usize {
        p.degree().saturating_sub(1).max(1)
    }

    fn bond(&self, i: usize, j: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_levels(self, i, j)?;
        p.include(i + 1)?;
        p.include(j + 1)
    }

    fn bond_tangent(&self, i: usize, j: usize, p: &FinVec<S>, v: &FinVec<S>) -> Result<FinVec<S>> {
        self.bond(i, j, p)?;
        v.include(i + 1)?;
        v.include(j + 1)
    }

    fn chart_for(&self, p: &FinVec<S>) -> StereoChart<S> {
        let x1 = p.get(1);
        let at_pole = if S::EXACT {
            x1 == S::one()
        } else {
            x1.to_f64() >= 1.0 - DOMAIN_GUARD
        };
        let sign = if at_pole { Sign::Minus } else { Sign::Plus };
        StereoChart::new(SpherePoint::basis(1), sign)
    }

    fn chart_min_level(&self, chart: &StereoChart<S>) -> usize {
        chart.min_level()
    }

    fn chart_inverse(&self, chart: &StereoChart<S>, level: usize, ybar: &FinVec<S>) -> Result<FinVec<S>> {
        self.check_chart_level(chart, level)?;
        ybar.include(level)?;
        Ok(chart.inverse(&chart.from_coords(ybar))?.into_coords())
    }

    fn chart_forward(&self, chart: &StereoChart<S>, level: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        self.check_chart_level(chart, level)?;
        let x = self.point_at(level, p)?;
        Ok(chart.to_coords(&chart.forward(&x)?))
    }

    fn chart_inverse_diff(
        &self,
        chart: &StereoChart<S>,
        level: usize,
        ybar: &FinVec<S>,
        vbar: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        self.check_chart_level(chart, level)?;
        ybar.include(level)?;
        vbar.include(level)?;
        chart.inverse_diff(&chart.from_coords(ybar), &chart.from_coords(vbar))
    }

    fn chart_forward_diff(
        &self,
        chart: &StereoChart<S>,
        level: usize,
        p: &FinVec<S>,
        v: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        self.check_chart_level(chart, level)?;
        let x = self.point_at(level, p)?;
        v.include(level + 1)?;
        Ok(chart.to_coords(&chart.forward_diff(x.coords(), v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    type V = FinVec<Rational>;

    #[test]
    fn levels_and_dims() {
        let t = SphereTower::new(8);
        assert_eq!(ManifoldTower::<Rational>::dim(&t, 3), 3);
        assert_eq!(ManifoldTower::<Rational>::ambient_dim(&t, 3), 4);
        assert_eq!(ManifoldTower::<Rational>::first_level(&t, &V::basis(2)), 1);
        assert_eq!(ManifoldTower::<Rational>::first_level(&t, &V::basis(5)), 4);
    }

    #[test]
    fn bond_is_identity_on_level() {
        let t = SphereTower::new(4);
        let p = V::new(vec![q(3, 5), q(4, 5)]);
        assert_eq!(ManifoldTower::bond(&t, 1, 1, &p).unwrap(), p);
        assert_eq!(ManifoldTower::bond(&t, 1, 3, &p).unwrap(), p);
        assert!(matches!(
            ManifoldTower::bond(&t, 3, 1, &p),
            Err(Error::LevelDecrease { .. })
        ));
        assert!(ManifoldTower::bond(&t, 1, 2, &V::basis(3)).is_err());
    }

    #[test]
    fn chart_selection_avoids_the_pole() {
        let t = SphereTower::new(4);
        assert_eq!(ManifoldTower::<Rational>::chart_for(&t, &V::basis(1)).sign(), Sign::Minus);
        assert_eq!(ManifoldTower::<Rational>::chart_for(&t, &V::basis(2)).sign(), Sign::Plus);
        assert_eq!(ManifoldTower::<f64>::chart_for(&t, &FinVec::new(vec![1.0 - 1e-12])).sign(), Sign::Minus);
    }

    #[test]
    fn chart_round_trip_at_level() {
        let t = SphereTower::new(4);
        let chart = StereoChart::plus(SpherePoint::basis(1));
        let ybar = V::new(vec![q(1, 2), q(-2, 3), q(5, 1)]);
        let p = t.chart_inverse(&chart, 3, &ybar).unwrap();
        assert!(t.contains(3, &p));
        assert_eq!(t.chart_forward(&chart, 3, &p).unwrap(), ybar);
        assert!(matches!(
            t.chart_inverse(&chart, 2, &ybar),
            Err(Error::AmbientTooSmall { .. })
        ));
    }

    #[test]
    fn chart_with_high_pole_needs_high_level() {
        let t = SphereTower::new(6);
        let chart = StereoChart::<Rational>::plus(SpherePoint::basis(4));
        assert_eq!(chart.min_level(), 3);
        assert!(matches!(
            t.chart_inverse(&chart, 2, &V::zero()),
            Err(Error::OutsideChartDomain(_))
        ));
        assert_eq!(t.chart_inverse(&chart, 3, &V::zero()).unwrap(), V::basis(4).neg());
    }
}
