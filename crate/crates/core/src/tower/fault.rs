use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::scalar::Scalar;

use super::ManifoldTower;

/// Deliberate defects for checking that the verification suites notice them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `lambda_ij` (for `i < j`) loses the last coordinate of `R^{d_i}`.
    DropCoordinate,
}

impl Fault {
    pub fn name(self) -> &'static str {
        match self {
            Fault::DropCoordinate => "drop-coordinate",
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop-coordinate" => Ok(Fault::DropCoordinate),
            other => Err(Error::ConfigInvalid(format!("unknown fault `{other}`"))),
        }
    }
}

/// A tower with a [`Fault`] injected; everything else delegates.
#[derive(Clone, Debug)]
pub struct FaultyTower<T> {
    inner: T,
    fault: Fault,
}

impl<T> FaultyTower<T> {
    pub fn new(inner: T, fault: Fault) -> Self {
        FaultyTower { inner, fault }
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    pub fn fault(&self) -> Fault {
        self.fault
    }
}

impl<S: Scalar, T: ManifoldTower<S>> ManifoldTower<S> for FaultyTower<T> {
    type Chart = T::Chart;

    fn name(&self) -> &str {
        self.inner.name()
    }

    fn max_level(&self) -> usize {
        self.inner.max_level()
    }

    fn dim(&self, level: usize) -> usize {
        self.inner.dim(level)
    }

    fn ambient_dim(&self, level: usize) -> usize {
        self.inner.ambient_dim(level)
    }

    fn contains(&self, level: usize, p: &FinVec<S>) -> bool {
        self.inner.contains(level, p)
    }

    fn first_level(&self, p: &FinVec<S>) -> usize {
        self.inner.first_level(p)
    }

    fn bond(&self, i: usize, j: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        self.inner.bond(i, j, p)
    }

    fn bond_tangent(&self, i: usize, j: usize, p: &FinVec<S>, v: &FinVec<S>) -> Result<FinVec<S>> {
        self.inner.bond_tangent(i, j, p, v)
    }

    fn coord_bond(&self, i: usize, j: usize, y: &FinVec<S>) -> Result<FinVec<S>> {
        let padded = self.inner.coord_bond(i, j, y)?;
        match self.fault {
            Fault::DropCoordinate if i < j => Ok(padded.truncate(self.dim(i).saturating_sub(1))),
            Fault::DropCoordinate => Ok(padded),
        }
    }

    fn chart_for(&self, p: &FinVec<S>) -> Self::Chart {
        self.inner.chart_for(p)
    }

    fn chart_min_level(&self, chart: &Self::Chart) -> usize {
        self.inner.chart_min_level(chart)
    }

    fn chart_inverse(&self, chart: &Self::Chart, level: usize, ybar: &FinVec<S>) -> Result<FinVec<S>> {
        self.inner.chart_inverse(chart, level, ybar)
    }

    fn chart_forward(&self, chart: &Self::Chart, level: usize, p: &FinVec<S>) -> Result<FinVec<S>> {
        self.inner.chart_forward(chart, level, p)
    }

    fn chart_inverse_diff(
        &self,
        chart: &Self::Chart,
        level: usize,
        ybar: &FinVec<S>,
        vbar: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        self.inner.chart_inverse_diff(chart, level, ybar, vbar)
    }

    fn chart_forward_diff(
        &self,
        chart: &Self::Chart,
        level: usize,
        p: &FinVec<S>,
        v: &FinVec<S>,
    ) -> Result<FinVec<S>> {
        self.inner.chart_forward_diff(chart, level, p, v)
    }
}
