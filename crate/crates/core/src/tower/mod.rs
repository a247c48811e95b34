//! Directed towers of finite-dimensional manifolds `M_1 -> M_2 -> ...` with
//! compatible chart families.
//!
//! Points of every level are written in one ambient coordinate space (a
//! [`FinVec`]), and the bonding maps `phi_ij` act on those coordinates. Chart
//! inverses `h_i: R^{d_i} -> M_i` must satisfy the compatibility condition
//!
//! ```text
//! h_j . lambda_ij = phi_ij . h_i        (j >= i >= n(x))
//! ```
//!
//! where `lambda_ij` is zero padding `R^{d_i} -> R^{d_j}`. Whether a given tower
//! really satisfies it is a sampled check, see [`crate::tangent::diagram_check`]
//! and the `charts` suite of the harness.
//!
//! Registered towers must also have closed images under `phi_ij`; that
//! hypothesis is not checked here.

mod euclidean;
mod fault;
mod random;
mod sphere;
mod stereo;

use std::fmt;
use std::str::FromStr;

pub use euclidean::{EuclideanTower, IdentityChart};
pub use fault::{Fault, FaultyTower};
pub use random::{random_rational_sphere_point, random_sphere_point};
pub use sphere::SphereTower;
pub use stereo::{Sign, SpherePoint, StereoChart, DOMAIN_GUARD};

use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::scalar::Scalar;

pub trait ManifoldTower<S: Scalar>: Send + Sync {
    /// Identifies a chart family `{h_i^{(x)}}`.
    type Chart: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync;

    fn name(&self) -> &str;

    /// Highest level of the truncation; levels start at 1.
    fn max_level(&self) -> usize;

    /// `d_i = dim M_i`, strictly increasing.
    fn dim(&self, level: usize) -> usize;

    /// Number of ambient coordinates used by points of `M_i`.
    fn ambient_dim(&self, level: usize) -> usize;

    fn contains(&self, level: usize, p: &FinVec<S>) -> bool;

    /// `n(x)`: the first level containing `p`.
    fn first_level(&self, p: &FinVec<S>) -> usize;

    /// `phi_ij` on points.
    fn bond(&self, i: usize, j: usize, p: &FinVec<S>) -> Result<FinVec<S>>;

    /// `d phi_ij` at `p`, applied to the ambient tangent vector `v`.
    fn bond_tangent(&self, i: usize, j: usize, p: &FinVec<S>, v: &FinVec<S>) -> Result<FinVec<S>>;

    /// `lambda_ij`: zero padding of chart coordinates.
    fn coord_bond(&self, i: usize, j: usize, y: &FinVec<S>) -> Result<FinVec<S>> {
        self.check_levels(i, j)?;
        y.include(self.dim(i))?;
        y.include(self.dim(j))
    }

    /// The chart family the tower assigns to a base point.
    fn chart_for(&self, p: &FinVec<S>) -> Self::Chart;

    /// First level on which the chart family is defined.
    fn chart_min_level(&self, chart: &Self::Chart) -> usize;

    /// `h_i(ybar)`.
    fn chart_inverse(&self, chart: &Self::Chart, level: usize, ybar: &FinVec<S>) -> Result<FinVec<S>>;

    /// `h_i^{-1}(p)`.
    fn chart_forward(&self, chart: &Self::Chart, level: usize, p: &FinVec<S>) -> Result<FinVec<S>>;

    /// `dh_i(ybar) vbar`, an ambient tangent vector at `h_i(ybar)`.
    fn chart_inverse_diff(
        &self,
        chart: &Self::Chart,
        level: usize,
        ybar: &FinVec<S>,
        vbar: &FinVec<S>,
    ) -> Result<FinVec<S>>;

    /// `d(h_i^{-1})(p) v`, chart coordinates of an ambient tangent vector.
    fn chart_forward_diff(
        &self,
        chart: &Self::Chart,
        level: usize,
        p: &FinVec<S>,
        v: &FinVec<S>,
    ) -> Result<FinVec<S>>;

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.max_level() {
            return Err(Error::IndexOutOfRange {
                index: level,
                min: 1,
                max: self.max_level(),
            });
        }
        Ok(())
    }

    fn check_levels(&self, i: usize, j: usize) -> Result<()> {
        self.check_level(i)?;
        self.check_level(j)?;
        if j < i {
            return Err(Error::LevelDecrease { from: i, to: j });
        }
        Ok(())
    }
}

/// Towers selectable by name from the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerKind {
    Sphere,
    Euclidean,
}

impl TowerKind {
    pub const ALL: [TowerKind; 2] = [TowerKind::Sphere, TowerKind::Euclidean];

    pub fn name(self) -> &'static str {
        match self {
            TowerKind::Sphere => "sphere",
            TowerKind::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for TowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TowerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TowerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownTower(s.to_string()))
    }
}
