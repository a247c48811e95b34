//! The limit of the tangent bundles and the tangent bundle of the limit agree
//! as sets. Checked from both sides on samples.

use serde::Serialize;

use crate::error::Result;
use crate::finseq::FinVec;
use crate::scalar::Scalar;
use crate::tower::ManifoldTower;

use super::{from_intrinsic, from_intrinsic_at, intrinsic_level, pushforward, tangent_system, to_intrinsic};
use super::{IntrinsicTangent, TangentRep};

/// How many levels above the starting one each class is compared at.
const SPAN: usize = 4;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RoundtripReport {
    /// Representatives checked against their pushforwards (`lim TM_i` side).
    pub limit_samples: usize,
    pub limit_failures: usize,
    /// Ambient tangents checked to land in some `TM_n` and come back.
    pub intrinsic_samples: usize,
    pub intrinsic_failures: usize,
    pub first_failure: Option<String>,
}

impl RoundtripReport {
    pub fn pass(&self) -> bool {
        self.limit_failures == 0 && self.intrinsic_failures == 0
    }

    fn record(&mut self, limit_side: bool, what: impl FnOnce() -> String) {
        if limit_side {
            self.limit_failures += 1;
        } else {
            self.intrinsic_failures += 1;
        }
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }
}

/// Class equality of two chart-coordinate pairs of one chart family:
/// `dirlim` equivalence for exact scalars, padded coordinates within `tol`
/// for floats.
fn same_class<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    a: &TangentRep<T::Chart, S>,
    b: &TangentRep<T::Chart, S>,
    tol: f64,
) -> Result<bool> {
    if a.chart != b.chart {
        return Ok(false);
    }
    if S::EXACT {
        let sys = tangent_system(tower, &a.chart);
        let ca = sys.inject(a.level, (a.base.clone(), a.vel.clone()))?;
        let cb = sys.inject(b.level, (b.base.clone(), b.vel.clone()))?;
        sys.equivalent(&ca, &cb)
    } else {
        Ok(a.base.approx_eq(&b.base, tol) && a.vel.approx_eq(&b.vel, tol))
    }
}

/// Verifies on samples that
///
/// 1. each representative at level `i` is in the same class as its
///    geometric pushforward to every level `j` in `i..=i+4`, and
/// 2. each ambient tangent `(x, v)` with finite support has a first level
///    `n` holding it, its chart coordinates there map back to `(x, v)`,
///    and its coordinates at higher levels lie in the same class.
pub fn prop2_roundtrip<S: Scalar, T: ManifoldTower<S>>(
    tower: &T,
    reps: &[TangentRep<T::Chart, S>],
    tangents: &[(IntrinsicTangent<S>, T::Chart)],
    tol: f64,
) -> RoundtripReport {
    let mut report = RoundtripReport {
        limit_samples: reps.len(),
        intrinsic_samples: tangents.len(),
        ..Default::default()
    };

    for rep in reps {
        let i = rep.level;
        let top = (i + SPAN).min(tower.max_level());
        let check = || -> Result<Option<usize>> {
            let t = to_intrinsic(tower, rep)?;
            for j in i..=top {
                let pushed = from_intrinsic_at(tower, &pushforward(tower, &t, i, j)?, &rep.chart, j)?;
                if !same_class(tower, rep, &pushed, tol)? {
                    return Ok(Some(j));
                }
            }
            Ok(None)
        };
        match check() {
            Ok(None) => {}
            Ok(Some(j)) => report.record(true, || format!("{rep} differs from its pushforward to level {j}")),
            Err(e) => report.record(true, || format!("{rep}: {e}")),
        }
    }

    for (t, chart) in tangents {
        let check = || -> Result<Option<String>> {
            let n = intrinsic_level(tower, t, chart)?;
            if n > tower.chart_min_level(chart)
                && tower.contains(n - 1, &t.point)
                && t.vector.degree() <= tower.ambient_dim(n - 1)
            {
                return Ok(Some(format!("level {n} is not the first level holding the tangent")));
            }
            let rep = from_intrinsic(tower, t, chart)?;
            let back = to_intrinsic(tower, &rep)?;
            if !back.approx_eq(t, tol) {
                return Ok(Some(format!("maps back to {back}")));
            }
            for j in n + 1..=(n + SPAN).min(tower.max_level()) {
                let higher = from_intrinsic_at(tower, t, chart, j)?;
                if !same_class(tower, &rep, &higher, tol)? {
                    return Ok(Some(format!("class at level {j} differs from level {n}")));
                }
            }
            Ok(None)
        };
        match check() {
            Ok(None) => {}
            Ok(Some(msg)) => report.record(false, || format!("{t}: {msg}")),
            Err(e) => report.record(false, || format!("{t}: {e}")),
        }
    }
    report
}

/// Projects `w` onto the tangent space of the unit sphere at `x`.
pub fn sphere_tangent_projection<S: Scalar>(x: &FinVec<S>, w: &FinVec<S>) -> FinVec<S> {
    w.sub(&x.scale(&x.weak_inner(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};
    use crate::tower::{SpherePoint, SphereTower, StereoChart};

    type V = FinVec<Rational>;

    #[test]
    fn zero_tangent_at_e2_lives_on_the_circle() {
        let t = SphereTower::new(6);
        let chart = StereoChart::plus(SpherePoint::basis(1));
        let tangent = IntrinsicTangent::new(V::basis(2), V::zero());
        assert_eq!(intrinsic_level(&t, &tangent, &chart).unwrap(), 1);
        let r = prop2_roundtrip(&t, &[], &[(tangent, chart)], 0.0);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn tangent_projection_is_orthogonal() {
        let x = V::new(vec![q(3, 5), q(4, 5)]);
        let v = sphere_tangent_projection(&x, &V::from_i64s(&[1, 2, 3]));
        assert!(x.weak_inner(&v) == q(0, 1));
    }
}
