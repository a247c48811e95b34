use std::fmt;

use crate::error::Result;
use crate::finseq::FinVec;
use crate::scalar::Scalar;

use super::ManifoldTower;

/// The single global chart of a coordinate space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IdentityChart;

impl fmt::Display for IdentityChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("id")
    }
}

/// `R^1 -> R^2 -> ...` as a manifold tower with identity charts.
#[derive(Clone, Debug)]
pub struct EuclideanTower {
    max_level: usize,
}

impl EuclideanTower {
    pub fn new(max_level: usize) -> Self {
        assert!(max_level >= 1);
        EuclideanTower { max_level }
    }
}

impl<S: Scalar> ManifoldTower<S> for EuclideanTower {
    type Chart = IdentityChart;

    fn name(&self) -> &str {
        "euclidean"
    }

    fn max_level(&self) -> usize {
        self.max_level
    }

    fn dim(&self, level: usize) -> usize {
        level
    }

    fn ambient_dim(&self, level: usize) -> usize {
        level
    }

    fn contains(&self, level: usize, p: &FinVec<S>) -> bool {
        p.degree() <= level
    }

    fn first_level(&self, p: &FinVec<S>) -> usize {
        p.degree().max(1)
    }

    fn bond(&self, i: usize, j: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_levels(self, i, j)?;
        p.include(i)?;
        p.include(j)
    }

    fn bond_tangent(&self, i: usize, j: usize, p: &FinVec<S>, v: &FinVec<S>) -> Result<FinVec<S>> {
        self.bond(i, j, p)?;
        v.include(i)?;
        v.include(j)
    }

    fn chart_for(&self, _p: &FinVec<S>) -> IdentityChart {
        IdentityChart
    }

    fn chart_min_level(&self, _chart: &IdentityChart) -> usize {
        1
    }

    fn chart_inverse(&self, _chart: &IdentityChart, level: usize, ybar: &FinVec<S>) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_level(self, level)?;
        ybar.include(level)
    }

    fn chart_forward(&self, _chart: &IdentityChart, level: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_level(self, level)?;
        p.include(level)
    }

    fn chart_inverse_diff(
        &self,
        _chart: &IdentityChart,
        level: usize,
        ybar: &FinVec<S>,
        vbar: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_level(self, level)?;
        ybar.include(level)?;
        vbar.include(level)
    }

    fn chart_forward_diff(
        &self,
        _chart: &IdentityChart,
        level: usize,
        p: &FinVec<S>,
        v: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        ManifoldTower::<S>::check_level(self, level)?;
        p.include(level)?;
        v.include(level)
    }
}
