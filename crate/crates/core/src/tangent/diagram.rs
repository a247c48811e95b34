//! Sampled compatibility squares between levels of a tower.
//!
//! Every check evaluates two composite paths independently and compares the
//! results. The "geometric" side always goes through ambient points and
//! velocities (chart inverses, their differentials and the bonding maps
//! `phi_ij`), never through the coordinate padding it is being compared to.

use serde::Serialize;

use crate::error::Result;
use crate::finseq::FinVec;
use crate::outcome::Outcome;
use crate::scalar::Scalar;
use crate::tower::ManifoldTower;

use super::{phi_t, projection, pushforward, th, to_intrinsic, trivialize, TangentRep};

/// `h_j . lambda_ij = phi_ij . h_i` at `ybar`.
pub fn chart_compatibility<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    chart: &T::Chart,
    i: usize,
    j: usize,
    ybar: &FinVec<S>,
    tol: f64,
) -> Result<Outcome> {
    let lhs = tower.chart_inverse(chart, j, &tower.coord_bond(i, j, ybar)?)?;
    let rhs = tower.bond(i, j, &tower.chart_inverse(chart, i, ybar)?)?;
    Ok(Outcome::compare_vec("h_j . lambda_ij vs phi_ij . h_i", &lhs, &rhs, tol))
}

/// `Phi_ij . Th_i = Th_j . (lambda_ij x lambda_ij)`, compared as ambient tangents.
pub fn lift_compatibility<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    chart: &T::Chart,
    i: usize,
    j: usize,
    ybar: &FinVec<S>,
    vbar: &FinVec<S>,
    tol: f64,
) -> Result<Outcome> {
    let rep_i = th(tower, chart, i, ybar.clone(), vbar.clone())?;
    let lhs = pushforward(tower, &to_intrinsic(tower, &rep_i)?, i, j)?;
    let rep_j = th(
        tower,
        chart,
        j,
        tower.coord_bond(i, j, ybar)?,
        tower.coord_bond(i, j, vbar)?,
    )?;
    let rhs = to_intrinsic(tower, &rep_j)?;
    Ok(Outcome::compare_vec("lift foot", &lhs.point, &rhs.point, tol)
        .and(Outcome::compare_vec("lift velocity", &lhs.vector, &rhs.vector, tol)))
}

/// `phi_ij . pi_i = pi_j . Phi_ij` on one representative.
pub fn projection_square<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
    j: usize,
    tol: f64,
) -> Result<Outcome> {
    let lhs = tower.bond(rep.level, j, &projection(tower, rep)?)?;
    let rhs = projection(tower, &phi_t(tower, rep, j)?)?;
    Ok(Outcome::compare_vec("phi_ij . pi_i vs pi_j . Phi_ij", &lhs, &rhs, tol))
}

/// Both paths of the trivialization square for one representative at level `i`:
///
/// ```text
/// (phi_ij x lambda_ij) . Psi_i   versus   Psi_j . Phi_ij
/// ```
///
/// The right-hand path realizes `Phi_ij` on the curve itself: ambient
/// tangent at level `i`, pushed by `phi_ij`, then read off by the level-`j`
/// chart differential.
pub fn diagram_residual<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    rep: &TangentRep<T::Chart, S>,
    j: usize,
    tol: f64,
) -> Result<Outcome> {
    let i = rep.level;
    let (foot, fiber) = trivialize(tower, rep)?;
    let lhs_foot = tower.bond(i, j, &foot)?;
    let lhs_fiber = tower.coord_bond(i, j, &fiber)?;

    let pushed = pushforward(tower, &to_intrinsic(tower, rep)?, i, j)?;
    let rhs_fiber = tower.chart_forward_diff(&rep.chart, j, &pushed.point, &pushed.vector)?;

    Ok(Outcome::compare_vec("diagram foot", &lhs_foot, &pushed.point, tol)
        .and(Outcome::compare_vec("diagram fiber", &lhs_fiber, &rhs_fiber, tol)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramReport {
    pub i: usize,
    pub j: usize,
    pub samples: usize,
    pub failures: usize,
    /// Max absolute coordinate difference between the two paths.
    pub max_residual: f64,
    pub first_counterexample: Option<String>,
}

impl DiagramReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Runs [`diagram_residual`] over samples at level `i`, pushing lower-level
/// samples up to `i` first.
pub fn diagram_check<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    i: usize,
    j: usize,
    samples: &[TangentRep<T::Chart, S>],
    tol: f64,
) -> DiagramReport {
    let mut report = DiagramReport {
        i,
        j,
        samples: samples.len(),
        failures: 0,
        max_residual: 0.0,
        first_counterexample: None,
    };
    for rep in samples {
        let outcome = phi_t(tower, rep, i)
            .and_then(|r| diagram_residual(tower, &r, j, tol))
            .unwrap_or_else(Outcome::from);
        if let Some(r) = outcome.residual {
            report.max_residual = report.max_residual.max(r);
        }
        if !outcome.pass {
            report.failures += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample =
                    Some(format!("{rep}: {}", outcome.detail.unwrap_or_default()));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_vec, trial_rng};
    use crate::scalar::Rational;
    use crate::tower::{Fault, FaultyTower, SpherePoint, SphereTower, StereoChart};

    fn samples(i: usize, n: usize) -> Vec<TangentRep<StereoChart<Rational>, Rational>> {
        let chart = StereoChart::plus(SpherePoint::basis(1));
        let mut rng = trial_rng(3, "diagram-unit", i as u64);
        (0..n)
            .map(|_| {
                TangentRep {
                    chart: chart.clone(),
                    level: i,
                    base: random_vec(&mut rng, i),
                    vel: random_vec(&mut rng, i),
                }
            })
            .collect()
    }

    #[test]
    fn sphere_diagram_is_exact() {
        let t = SphereTower::new(8);
        for i in 2..=4 {
            for j in i..=8 {
                let r = diagram_check(&t, i, j, &samples(i, 10), 0.0);
                assert!(r.pass(), "{r:?}");
                assert_eq!(r.max_residual, 0.0);
            }
        }
    }

    #[test]
    fn equal_levels_have_zero_residual() {
        let t = SphereTower::new(4);
        let r = diagram_check(&t, 3, 3, &samples(3, 10), 0.0);
        assert!(r.pass());
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn dropped_coordinate_is_detected() {
        let t = FaultyTower::new(SphereTower::new(6), Fault::DropCoordinate);
        let r = diagram_check(&t, 3, 5, &samples(3, 20), 0.0);
        assert!(!r.pass());
        assert!(r.max_residual > 0.0);
        assert!(r.first_counterexample.is_some());
    }
}
