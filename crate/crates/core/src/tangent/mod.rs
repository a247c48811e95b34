//! Tangent bundles of a tower and of its limit.
//!
//! A tangent vector of `M_i` is a class of curves `[gamma, y]` with common
//! foot and velocity. In a chart `h_i` every class has exactly one affine
//! representative `t -> h_i(ybar + t vbar)`, so a [`TangentRep`] stores the
//! pair `(ybar, vbar)` together with the chart family and level. On these
//! coordinates:
//!
//! * the bonding maps `Phi_ij[gamma, y] = [phi_ij . gamma, phi_ij(y)]` become
//!   zero padding of both slots ([`phi_t`]);
//! * the trivialization `Psi_i[gamma, y] = (y, (h_i^{-1} . gamma)'(0))` sends a
//!   representative to its foot and `vbar` ([`Trivialization`]);
//! * two trivializations over the same foot differ by a matrix of the stable
//!   linear group ([`transition_fiber`]).
//!
//! The ambient picture ([`IntrinsicTangent`]) evaluates curves through the
//! tower itself and is what the compatibility checks compare against.

mod derivative;
mod diagram;
mod roundtrip;

pub use derivative::{directional_derivative, fd_jacobian_columns, relative_error, FD_REL_TOL, FD_STEP};
pub use diagram::{
    chart_compatibility, diagram_check, diagram_residual, lift_compatibility, projection_square,
    DiagramReport,
};
pub use roundtrip::{prop2_roundtrip, sphere_tangent_projection, RoundtripReport};

use std::fmt;

use crate::dirlim::DirectedSystem;
use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::glinf::GlInf;
use crate::scalar::Scalar;
use crate::tower::ManifoldTower;

/// Chart coordinates `(ybar, vbar)` of a tangent vector at some level.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentRep<C, S> {
    pub chart: C,
    pub level: usize,
    pub base: FinVec<S>,
    pub vel: FinVec<S>,
}

impl<C: fmt::Display, S: Scalar> fmt::Display for TangentRep<C, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[chart {} level {}: base {}, vel {}]",
            self.chart, self.level, self.base, self.vel
        )
    }
}

/// A tangent vector in ambient coordinates: a point and a velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicTangent<S> {
    pub point: FinVec<S>,
    pub vector: FinVec<S>,
}

impl<S: Scalar> IntrinsicTangent<S> {
    pub fn new(point: FinVec<S>, vector: FinVec<S>) -> Self {
        IntrinsicTangent { point, vector }
    }

    /// `<x, v>`, zero exactly when `v` is tangent to the unit sphere at `x`.
    pub fn sphere_defect(&self) -> S {
        self.point.weak_inner(&self.vector)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.point
            .max_abs_diff(&other.point)
            .max(self.vector.max_abs_diff(&other.vector))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.point.approx_eq(&other.point, tol) && self.vector.approx_eq(&other.vector, tol)
    }
}

impl<S: Scalar> fmt::Display for IntrinsicTangent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {})", self.point, self.vector)
    }
}

/// `Th_i`: the tangent vector of `t -> h_i(ybar + t vbar)`.
pub fn th<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    chart: &T::Chart,
    level: usize,
    ybar: FinVec<S>,
    vbar: FinVec<S>,
) -> Result<TangentRep<T::Chart, S>> {
    let d = tower.dim(level);
    ybar.include(d)?;
    vbar.include(d)?;
    tower.chart_inverse(chart, level, &ybar)?;
    Ok(TangentRep {
        chart: chart.clone(),
        level,
        base: ybar,
        vel: vbar,
    })
}

/// `Phi_ij` in chart coordinates: the same pair, viewed at level `j`.
pub fn phi_t<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
    j: usize,
) -> Result<TangentRep<T::Chart, S>> {
    if j < rep.level {
        return Err(Error::LevelDecrease { from: rep.level, to: j });
    }
    tower.check_level(j)?;
    Ok(TangentRep {
        chart: rep.chart.clone(),
        level: j,
        base: tower.coord_bond(rep.level, j, &rep.base)?,
        vel: tower.coord_bond(rep.level, j, &rep.vel)?,
    })
}

/// `pi`: the foot point `h_i(ybar)`.
pub fn projection<S: Scalar, T: ManifoldTower<S>>(tower: &T, rep: &TangentRep<T::Chart, S>) -> Result<FinVec<S>> {
    tower.chart_inverse(&rep.chart, rep.level, &rep.base)
}

/// Ambient point and velocity of a representative.
pub fn to_intrinsic<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
) -> Result<IntrinsicTangent<S>> {
    let point = tower.chart_inverse(&rep.chart, rep.level, &rep.base)?;
    let vector = tower.chart_inverse_diff(&rep.chart, rep.level, &rep.base, &rep.vel)?;
    Ok(IntrinsicTangent { point, vector })
}

/// Chart coordinates of an ambient tangent vector at a given level.
pub fn from_intrinsic_at<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    t: &IntrinsicTangent<S>,
    chart: &T::Chart,
    level: usize,
) -> Result<TangentRep<T::Chart, S>> {
    if t.vector.degree() > tower.ambient_dim(level) {
        return Err(Error::AmbientTooSmall {
            degree: t.vector.degree(),
            ambient: tower.ambient_dim(level),
        });
    }
    let base = tower.chart_forward(chart, level, &t.point)?;
    let vel = tower.chart_forward_diff(chart, level, &t.point, &t.vector)?;
    Ok(TangentRep {
        chart: chart.clone(),
        level,
        base,
        vel,
    })
}

/// The first level at which both the point and the velocity of `t` live
/// and the chart is defined.
pub fn intrinsic_level<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    t: &IntrinsicTangent<S>,
    chart: &T::Chart,
) -> Result<usize> {
    let start = tower.first_level(&t.point).max(tower.chart_min_level(chart));
    (start..=tower.max_level())
        .find(|&l| tower.contains(l, &t.point) && t.vector.degree() <= tower.ambient_dim(l))
        .ok_or_else(|| Error::AmbientTooSmall {
            degree: t.point.degree().max(t.vector.degree()),
            ambient: tower.ambient_dim(tower.max_level()),
        })
}

/// Chart coordinates of `t` at the first level that holds it.
pub fn from_intrinsic<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    t: &IntrinsicTangent<S>,
    chart: &T::Chart,
) -> Result<TangentRep<T::Chart, S>> {
    let level = intrinsic_level(tower, t, chart)?;
    from_intrinsic_at(tower, t, chart, level)
}

/// `Phi_ij` on ambient data: `(phi_ij(x), d phi_ij(x) v)`.
pub fn pushforward<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    t: &IntrinsicTangent<S>,
    i: usize,
    j: usize,
) -> Result<IntrinsicTangent<S>> {
    Ok(IntrinsicTangent {
        point: tower.bond(i, j, &t.point)?,
        vector: tower.bond_tangent(i, j, &t.point, &t.vector)?,
    })
}

/// The local trivialization `Psi_i` attached to a chart family at a level.
#[derive(Clone, Debug, PartialEq)]
pub struct Trivialization<C> {
    pub chart: C,
    pub level: usize,
}

impl<C: Clone + PartialEq> Trivialization<C> {
    pub fn new(chart: C, level: usize) -> Self {
        Trivialization { chart, level }
    }

    /// `Psi_i(rep) = (foot, fiber)`.
    ///
    /// A representative in this trivialization's own chart family maps to
    /// `(h_i(ybar), vbar)` directly; any other goes through its ambient
    /// tangent and this chart's differential.
    pub fn apply<S: Scalar, T: ManifoldTower<S, Chart = C>>(
        &self,
        tower: &T,
        rep: &TangentRep<C, S>,
    ) -> Result<(FinVec<S>, FinVec<S>)> {
        let rep = phi_t(tower, rep, self.level)?;
        if rep.chart == self.chart {
            let foot = tower.chart_inverse(&self.chart, self.level, &rep.base)?;
            return Ok((foot, rep.vel));
        }
        let t = to_intrinsic(tower, &rep)?;
        let fiber = tower.chart_forward_diff(&self.chart, self.level, &t.point, &t.vector)?;
        Ok((t.point, fiber))
    }

    /// `Psi_i^{-1}(foot, fiber)`, as a representative in this chart family.
    pub fn inverse<S: Scalar, T: ManifoldTower<S, Chart = C>>(
        &self,
        tower: &T,
        foot: &FinVec<S>,
        fiber: &FinVec<S>,
    ) -> Result<TangentRep<C, S>> {
        let base = tower.chart_forward(&self.chart, self.level, foot)?;
        let vel = fiber.include(tower.dim(self.level))?;
        Ok(TangentRep {
            chart: self.chart.clone(),
            level: self.level,
            base,
            vel,
        })
    }
}

/// `Psi_i` of the representative's own chart family.
pub fn trivialize<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
) -> Result<(FinVec<S>, FinVec<S>)> {
    Trivialization::new(rep.chart.clone(), rep.level).apply(tower, rep)
}

/// Re-expresses a representative in another chart family at the same level.
pub fn change_chart<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
    to: &T::Chart,
) -> Result<TangentRep<T::Chart, S>> {
    let psi = Trivialization::new(to.clone(), rep.level);
    let (foot, fiber) = psi.apply(tower, rep)?;
    psi.inverse(tower, &foot, &fiber)
}

/// `h_b^{-1} . h_a` on chart coordinates at one level.
pub fn coordinate_transition<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    from: &T::Chart,
    to: &T::Chart,
    level: usize,
    ybar: &FinVec<S>,
) -> Result<FinVec<S>> {
    let p = tower.chart_inverse(from, level, ybar)?;
    tower.chart_forward(to, level, &p)
}

/// The fiber transition `T_ab(foot) = Psi_b . Psi_a^{-1}` restricted to the
/// fiber over `foot`, assembled column by column from basis fibers.
///
/// The result is the `d_level x d_level` block; as a group element it acts
/// as the identity past that block, so the level is part of the answer.
pub fn transition_fiber<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    from: &T::Chart,
    to: &T::Chart,
    foot: &FinVec<S>,
    level: usize,
) -> Result<GlInf<S>> {
    let d = tower.dim(level);
    // Psi_a^{-1}(foot, e_k) has base h_a^{-1}(foot) and velocity e_k; Psi_b
    // reads it through the ambient tangent. The foot data is shared.
    let base = tower.chart_forward(from, level, foot)?;
    tower.chart_forward(to, level, foot)?;
    if from == to {
        return Ok(GlInf::identity());
    }
    let mut rows = vec![Vec::with_capacity(d); d];
    for k in 1..=d {
        let vector = tower.chart_inverse_diff(from, level, &base, &FinVec::basis(k))?;
        let fiber = tower.chart_forward_diff(to, level, foot, &vector)?;
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(fiber.get(r + 1));
        }
    }
    GlInf::from_block(rows).map_err(|e| match e {
        Error::Singular => Error::NumericallySingular {
            pivot: 0.0,
            threshold: crate::glinf::FLOAT_PIVOT_THRESHOLD,
        },
        other => other,
    })
}

/// Chart-coordinate pairs, the elements of the system `TM_i`.
pub type TangentCoords<S> = (FinVec<S>, FinVec<S>);

/// The tangent tower `TM_i -> TM_j` of one chart family, as a directed
/// system on `(ybar, vbar)` pairs.
pub fn tangent_system<S: Scalar, T: ManifoldTower<S>>(tower: &T, chart: &T::Chart) -> DirectedSystem<TangentCoords<S>> {
    let min = tower.chart_min_level(chart);
    let max = tower.max_level();
    let dims: Vec<usize> = (0..=max).map(|l| if l == 0 { 0 } else { tower.dim(l) }).collect();
    let fits = move |i: usize, (y, v): &TangentCoords<S>| y.degree() <= dims[i] && v.degree() <= dims[i];
    let fits_pre = fits.clone();
    DirectedSystem::new(format!("tangent:{}", tower.name()), min..=max, |_, _, yv: &TangentCoords<S>| yv.clone())
        .injective(true)
        .with_membership(fits)
        .with_preimage(move |_, i, yv| fits_pre(i, yv).then(|| yv.clone()))
}
