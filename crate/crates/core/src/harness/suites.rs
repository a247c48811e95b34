//! The property suites. Every trial draws fresh inputs from its own stream
//! and returns one outcome per check.

use rand::Rng;

use crate::dirlim::coordinate_spaces;
use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::glinf::{gl_system, GlInf};
use crate::outcome::Outcome;
use crate::sampling::{random_full_vec, random_gl, random_vec, SampleScalar, TrialRng};
use crate::scalar::Scalar;
use crate::tangent::{
    change_chart, chart_compatibility, coordinate_transition, diagram_residual, directional_derivative,
    from_intrinsic_at, intrinsic_level, lift_compatibility, phi_t, projection, projection_square,
    prop2_roundtrip, relative_error, sphere_tangent_projection, th, to_intrinsic, transition_fiber,
    trivialize, TangentRep, Trivialization, FD_REL_TOL, FD_STEP, IntrinsicTangent,
};
use crate::tower::{
    random_sphere_point, EuclideanTower, FaultyTower, IdentityChart,
    ManifoldTower, Sign, SpherePoint, SphereTower, StereoChart,
};

use super::trials::{run_trials, TrialOutcomes};
use super::{CheckRecord, Dims, Suite, SuiteConfig};

/// Largest block drawn by the group suite.
pub(crate) const GROUP_MAX_BLOCK: usize = 8;

/// Feet used for chart-change checks stay at least this far (in `1 - <x, centre>`)
/// from every excluded point.
pub(crate) const MARGIN: f64 = 0.05;

const FOOT_ATTEMPTS: usize = 10_000;

pub(crate) trait HarnessScalar: SampleScalar + 'static {}

impl<T: SampleScalar + 'static> HarnessScalar for T {}

/// What the suites need from a tower beyond [`ManifoldTower`].
pub(crate) trait HarnessTower<S: HarnessScalar>: ManifoldTower<S> {
    /// The chart family coordinate samples are drawn in.
    fn family_chart(&self) -> Self::Chart;

    /// A point of `M_level`.
    fn sample_point(&self, rng: &mut TrialRng, level: usize) -> FinVec<S>;

    /// A tangent vector at `point`, in ambient coordinates of `M_level`.
    fn sample_tangent(&self, rng: &mut TrialRng, level: usize, point: &FinVec<S>) -> FinVec<S>;

    /// Another chart whose domain contains `foot` comfortably.
    fn alternate_chart(&self, rng: &mut TrialRng, level: usize, foot: &FinVec<S>) -> Self::Chart;

    fn chart_extra_checks(&self) -> &'static [&'static str] {
        &[]
    }

    fn chart_extras(&self, _rng: &mut TrialRng, _i: usize, _j: usize, _tol: f64) -> TrialOutcomes {
        Vec::new()
    }

    /// Runs a suite that only makes sense on stereographic charts.
    fn sphere_suite(&self, _config: &SuiteConfig, suite: Suite) -> Result<Vec<CheckRecord>> {
        Err(Error::ConfigInvalid(format!("suite {suite} needs the sphere tower")))
    }
}

macro_rules! sphere_harness {
    ($tower:ty) => {
        impl<S: HarnessScalar> HarnessTower<S> for $tower {
            fn family_chart(&self) -> StereoChart<S> {
                StereoChart::plus(SpherePoint::basis(1))
            }

            fn sample_point(&self, rng: &mut TrialRng, level: usize) -> FinVec<S> {
                sphere_point(rng, level)
            }

            fn sample_tangent(&self, rng: &mut TrialRng, level: usize, point: &FinVec<S>) -> FinVec<S> {
                sphere_tangent_projection(point, &random_vec(rng, level + 1))
            }

            fn alternate_chart(&self, rng: &mut TrialRng, level: usize, foot: &FinVec<S>) -> StereoChart<S> {
                let pole = SpherePoint::new(sphere_point(rng, level)).expect("sampled on the sphere");
                chart_away_from(pole, foot)
            }

            fn chart_extra_checks(&self) -> &'static [&'static str] {
                SPHERE_CHART_EXTRAS
            }

            fn chart_extras(&self, rng: &mut TrialRng, i: usize, j: usize, tol: f64) -> TrialOutcomes {
                sphere_chart_extras::<S, _>(self, rng, i, j, tol)
            }

            fn sphere_suite(&self, config: &SuiteConfig, suite: Suite) -> Result<Vec<CheckRecord>> {
                match suite {
                    Suite::Cocycle => Ok(cocycle::<S, _>(config, self)),
                    Suite::Tangency => Ok(tangency::<S, _>(config, self)),
                    Suite::Derivative => Ok(derivative(config, self)),
                    other => Err(Error::ConfigInvalid(format!("{other} is not a sphere suite"))),
                }
            }
        }
    };
}

macro_rules! euclidean_harness {
    ($tower:ty) => {
        impl<S: HarnessScalar> HarnessTower<S> for $tower {
            fn family_chart(&self) -> IdentityChart {
                IdentityChart
            }

            fn sample_point(&self, rng: &mut TrialRng, level: usize) -> FinVec<S> {
                random_vec(rng, level)
            }

            fn sample_tangent(&self, rng: &mut TrialRng, level: usize, _point: &FinVec<S>) -> FinVec<S> {
                random_vec(rng, level)
            }

            fn alternate_chart(&self, _rng: &mut TrialRng, _level: usize, _foot: &FinVec<S>) -> IdentityChart {
                IdentityChart
            }
        }
    };
}

sphere_harness!(SphereTower);
sphere_harness!(FaultyTower<SphereTower>);
euclidean_harness!(EuclideanTower);
euclidean_harness!(FaultyTower<EuclideanTower>);

pub(crate) fn run<S: HarnessScalar, T: HarnessTower<S>>(
    config: &SuiteConfig,
    suite: Suite,
    tower: &T,
) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::Group => Ok(group::<S>(config)),
        Suite::Functorial => Ok(functorial(config, tower)),
        Suite::Charts => Ok(charts(config, tower)),
        Suite::Diagram => Ok(diagram(config, tower)),
        Suite::Roundtrip => Ok(roundtrip(config, tower)),
        Suite::Cocycle | Suite::Tangency | Suite::Derivative => tower.sphere_suite(config, suite),
        Suite::All => Err(Error::ConfigInvalid("`all` is expanded before dispatch".into())),
    }
}

// ---- sampling helpers ----

/// Exact points are inverse `e_1`-chart images of small integer vectors,
/// which keeps heights (and big-integer costs) low at level 12.
fn sphere_point<S: HarnessScalar>(rng: &mut TrialRng, level: usize) -> FinVec<S> {
    if S::EXACT {
        let chart = StereoChart::plus(SpherePoint::basis(1));
        let ybar = FinVec::new((0..level).map(|_| S::from_i64(rng.random_range(-2..=2))).collect());
        chart
            .inverse(&chart.from_coords(&ybar))
            .expect("e_1-perp lies in the chart image")
            .into_coords()
    } else {
        random_sphere_point(level, rng.random())
            .into_coords()
            .map(|c| S::from_f64_lossy(*c))
    }
}

/// The chart with this pole whose excluded point is on the far side of `foot`,
/// so `1 - <foot, centre> >= 1`.
fn chart_away_from<S: Scalar>(pole: SpherePoint<S>, foot: &FinVec<S>) -> StereoChart<S> {
    let sign = if foot.weak_inner(pole.coords()).to_f64() < 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    StereoChart::new(pole, sign)
}

fn denominator<S: Scalar>(chart: &StereoChart<S>, x: &FinVec<S>) -> f64 {
    1.0 - x.weak_inner(&chart.centre()).to_f64()
}

fn level(rng: &mut TrialRng, dims: Dims) -> usize {
    rng.random_range(dims.min..=dims.max)
}

/// `i < j` when the range allows it, else `i = j`.
fn level_pair(rng: &mut TrialRng, dims: Dims) -> (usize, usize) {
    if dims.min == dims.max {
        return (dims.min, dims.min);
    }
    let i = rng.random_range(dims.min..dims.max);
    (i, rng.random_range(i + 1..=dims.max))
}

fn level_triple(rng: &mut TrialRng, dims: Dims) -> (usize, usize, usize) {
    let mut l = [level(rng, dims), level(rng, dims), level(rng, dims)];
    l.sort_unstable();
    (l[0], l[1], l[2])
}

fn attempt(f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(Outcome::from)
}

fn holds(cond: bool, detail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Outcome::ok()
    } else {
        Outcome::fail(detail())
    }
}

fn compare_reps<C: PartialEq + std::fmt::Display, S: Scalar>(
    label: &str,
    a: &TangentRep<C, S>,
    b: &TangentRep<C, S>,
    tol: f64,
) -> Outcome {
    holds(a.level == b.level && a.chart == b.chart, || format!("{label}: {a} vs {b}"))
        .and(Outcome::compare_vec(label, &a.base, &b.base, tol))
        .and(Outcome::compare_vec(label, &a.vel, &b.vel, tol))
}

fn compare_tangents<S: Scalar>(label: &str, a: &IntrinsicTangent<S>, b: &IntrinsicTangent<S>, tol: f64) -> Outcome {
    Outcome::compare_vec(label, &a.point, &b.point, tol).and(Outcome::compare_vec(label, &a.vector, &b.vector, tol))
}

fn sample_rep<S: HarnessScalar, T: HarnessTower<S>>(
    tower: &T,
    rng: &mut TrialRng,
    level: usize,
) -> Result<TangentRep<T::Chart, S>> {
    let d = tower.dim(level);
    let ybar = random_vec(rng, d);
    let vbar = random_vec(rng, d);
    th(tower, &tower.family_chart(), level, ybar, vbar)
}

// ---- group ----

fn group<S: HarnessScalar>(config: &SuiteConfig) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["associativity", "identity", "inverse", "embedding", "action", "canonical"];
    let tol = config.tol;
    run_trials(config, "group", CHECKS, S::EXACT, |rng, _| {
        let g: GlInf<S> = random_gl(rng, GROUP_MAX_BLOCK);
        let h: GlInf<S> = random_gl(rng, GROUP_MAX_BLOCK);
        let k: GlInf<S> = random_gl(rng, GROUP_MAX_BLOCK);
        let id = GlInf::identity();

        let associativity = Outcome::compare_gl(
            "(gh)k vs g(hk)",
            &g.compose(&h).compose(&k),
            &g.compose(&h.compose(&k)),
            tol,
        );
        let identity = Outcome::compare_gl("g.id vs g", &g.compose(&id), &g, tol)
            .and(Outcome::compare_gl("id.g vs g", &id.compose(&g), &g, tol));
        let inverse = attempt(|| {
            let inv = g.inverse()?;
            // float blocks may be ill-conditioned; scale by the condition bound
            let scale = if S::EXACT {
                1.0
            } else {
                (g.max_abs_entry() * inv.max_abs_entry() * g.size() as f64).max(1.0)
            };
            Ok(Outcome::compare_gl("g.g^-1 vs id", &g.compose(&inv), &id, tol * scale)
                .and(Outcome::compare_gl("g^-1.g vs id", &inv.compose(&g), &id, tol * scale)))
        });
        let embedding = attempt(|| {
            let n = g.size().max(h.size());
            let m = n + rng.random_range(0..=4);
            let top = m + rng.random_range(0..=4);
            Ok(Outcome::compare_gl("embed twice vs once", &g.embed(m)?.embed(top)?, &g.embed(top)?, tol)
                .and(Outcome::compare_gl(
                    "compose after embed vs embed after compose",
                    &g.embed(m)?.compose(&h.embed(m)?),
                    &g.compose(&h).embed(m)?,
                    tol,
                )))
        });
        let action = attempt(|| {
            let v: FinVec<S> = random_vec(rng, GROUP_MAX_BLOCK + 2);
            let d = g.size().max(v.degree()) + rng.random_range(0..=3);
            Ok(Outcome::compare_vec(
                "apply(gh) vs apply(g) apply(h)",
                &g.compose(&h).apply(&v),
                &g.apply(&h.apply(&v)),
                tol,
            )
            .and(Outcome::compare_vec(
                "apply(g, include(v)) vs apply(embed(g), v)",
                &g.apply(&v.include(d)?),
                &g.embed(d)?.apply(&v),
                tol,
            )))
        });
        let canonical = attempt(|| {
            let n = g.size();
            Ok(Outcome::compare_gl("from_block(block)", &GlInf::from_block(g.padded_block(n))?, &g, 0.0)
                .and(Outcome::compare_gl(
                    "from_block(padded block)",
                    &GlInf::from_block(g.padded_block(n + 2))?,
                    &g,
                    0.0,
                )))
        });
        vec![
            ("associativity", associativity),
            ("identity", identity),
            ("inverse", inverse),
            ("embedding", embedding),
            ("action", action),
            ("canonical", canonical),
        ]
    })
}

// ---- functorial ----

fn functorial<S: HarnessScalar, T: HarnessTower<S>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &[
        "rn.identity",
        "rn.composition",
        "gl.identity",
        "gl.composition",
        "tangent.identity",
        "tangent.composition",
        "limit.equivalence",
        "limit.injective",
    ];
    let tol = config.tol;
    let rn = coordinate_spaces::<S>(config.dims.max);
    let gl = gl_system::<S>(config.dims.max);
    run_trials(config, "functorial", CHECKS, S::EXACT, |rng, _| {
        let (i, j, k) = level_triple(rng, config.dims);
        let x: FinVec<S> = random_vec(rng, i);
        let y: FinVec<S> = random_full_vec(rng, i);
        let g: GlInf<S> = random_gl(rng, i);

        let rn_identity = attempt(|| Ok(Outcome::compare_vec("e_ii(x) vs x", &rn.bond(i, i, &x)?, &x, tol)));
        let rn_composition = attempt(|| {
            Ok(Outcome::compare_vec(
                "e_jk e_ij (x) vs e_ik (x)",
                &rn.bond(j, k, &rn.bond(i, j, &x)?)?,
                &rn.bond(i, k, &x)?,
                tol,
            ))
        });
        let gl_identity = attempt(|| Ok(Outcome::compare_gl("e_ii(g) vs g", &gl.bond(i, i, &g)?, &g, tol)));
        let gl_composition = attempt(|| {
            Ok(Outcome::compare_gl(
                "e_jk e_ij (g) vs e_ik (g)",
                &gl.bond(j, k, &gl.bond(i, j, &g)?)?,
                &gl.bond(i, k, &g)?,
                tol,
            ))
        });
        let rep = sample_rep(tower, rng, i);
        let tangent_identity = attempt(|| {
            let rep = rep.clone()?;
            Ok(compare_reps("Phi_ii(r) vs r", &phi_t(tower, &rep, i)?, &rep, tol))
        });
        let tangent_composition = attempt(|| {
            let rep = rep.clone()?;
            Ok(compare_reps(
                "Phi_jk Phi_ij (r) vs Phi_ik (r)",
                &phi_t(tower, &phi_t(tower, &rep, j)?, k)?,
                &phi_t(tower, &rep, k)?,
                tol,
            ))
        });
        let equivalence = attempt(|| {
            let a = rn.inject(i, x.clone())?;
            let b = rn.inject(j, rn.bond(i, j, &x)?)?;
            Ok(holds(rn.equivalent(&a, &b)? && rn.equivalent(&b, &a)?, || {
                format!("inject({i}, {x}) not equivalent to its image at level {j}")
            }))
        });
        let injective = attempt(|| {
            let a = rn.inject(j, rn.bond(i, j, &x)?)?;
            let b = rn.inject(k, rn.bond(i, k, &y)?)?;
            Ok(holds((x == y) == rn.equivalent(&a, &b)?, || {
                format!("classes of {x} and {y} compare wrongly")
            }))
        });
        vec![
            ("rn.identity", rn_identity),
            ("rn.composition", rn_composition),
            ("gl.identity", gl_identity),
            ("gl.composition", gl_composition),
            ("tangent.identity", tangent_identity),
            ("tangent.composition", tangent_composition),
            ("limit.equivalence", equivalence),
            ("limit.injective", injective),
        ]
    })
}

// ---- charts ----

const SPHERE_CHART_EXTRAS: &[&str] = &["general-pole-round-trip", "codomain-perp", "transition-naturality"];

fn charts<S: HarnessScalar, T: HarnessTower<S>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    let mut checks: Vec<&'static str> = vec!["compatibility", "round-trip", "inverse-round-trip", "image-on-manifold"];
    checks.extend_from_slice(tower.chart_extra_checks());
    let tol = config.tol;
    run_trials(config, "charts", &checks, S::EXACT, |rng, _| {
        let (i, j) = level_pair(rng, config.dims);
        let family = tower.family_chart();
        let ybar: FinVec<S> = random_vec(rng, tower.dim(i));
        let x = tower.sample_point(rng, i);

        let compatibility = attempt(|| chart_compatibility(tower, &family, i, j, &ybar, tol));
        let round_trip = attempt(|| {
            let chart = tower.chart_for(&x);
            let back = tower.chart_inverse(&chart, i, &tower.chart_forward(&chart, i, &x)?)?;
            Ok(Outcome::compare_vec("h(h^-1(x)) vs x", &back, &x, tol))
        });
        let inverse_round_trip = attempt(|| {
            let back = tower.chart_forward(&family, i, &tower.chart_inverse(&family, i, &ybar)?)?;
            Ok(Outcome::compare_vec("h^-1(h(y)) vs y", &back, &ybar, tol))
        });
        let image = attempt(|| {
            let p = tower.chart_inverse(&family, i, &ybar)?;
            Ok(holds(tower.contains(i, &p), || format!("h({ybar}) = {p} is not on M_{i}")))
        });
        let mut out = vec![
            ("compatibility", compatibility),
            ("round-trip", round_trip),
            ("inverse-round-trip", inverse_round_trip),
            ("image-on-manifold", image),
        ];
        out.extend(tower.chart_extras(rng, i, j, tol));
        out
    })
}

fn sphere_chart_extras<S: HarnessScalar, T: HarnessTower<S, Chart = StereoChart<S>>>(
    tower: &T,
    rng: &mut TrialRng,
    i: usize,
    j: usize,
    tol: f64,
) -> TrialOutcomes {
    let x = tower.sample_point(rng, i);
    let pole = SpherePoint::new(tower.sample_point(rng, i)).expect("sampled on the sphere");
    let chart = chart_away_from(pole.clone(), &x);

    let general = attempt(|| {
        let back = tower.chart_inverse(&chart, i, &tower.chart_forward(&chart, i, &x)?)?;
        Ok(Outcome::compare_vec("u^-1(u(x)) vs x", &back, &x, tol))
    });
    let perp = attempt(|| {
        let y = chart.forward(&SpherePoint::new(x.clone())?)?;
        Ok(Outcome::compare_scalar("<u(x), a>", &y.weak_inner(pole.coords()), &S::zero(), tol))
    });
    let naturality = attempt(|| {
        let family = tower.family_chart();
        let ybar: FinVec<S> = random_full_vec(rng, tower.dim(i));
        let foot = tower.chart_inverse(&family, i, &ybar)?;
        let other = tower.alternate_chart(rng, i, &foot);
        let low = coordinate_transition(tower, &family, &other, i, &ybar)?;
        let high = coordinate_transition(tower, &family, &other, j, &tower.coord_bond(i, j, &ybar)?)?;
        Ok(Outcome::compare_vec(
            "transition at level i, padded, vs transition at level j",
            &tower.coord_bond(i, j, &low)?,
            &high,
            tol,
        ))
    });
    vec![
        ("general-pole-round-trip", general),
        ("codomain-perp", perp),
        ("transition-naturality", naturality),
    ]
}

// ---- diagram ----

fn diagram<S: HarnessScalar, T: HarnessTower<S>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["square", "equal-levels", "lift", "projection", "foot", "fiber-linearity"];
    let tol = config.tol;
    run_trials(config, "diagram", CHECKS, S::EXACT, |rng, _| {
        let (i, j) = level_pair(rng, config.dims);
        let d = tower.dim(i);
        let family = tower.family_chart();
        let ybar: FinVec<S> = random_vec(rng, d);
        let v1: FinVec<S> = random_vec(rng, d);
        let v2: FinVec<S> = random_vec(rng, d);
        let c = S::sample_small(rng);
        let rep = th(tower, &family, i, ybar.clone(), v1.clone());

        let square = attempt(|| diagram_residual(tower, &rep.clone()?, j, tol));
        let equal = attempt(|| diagram_residual(tower, &rep.clone()?, i, tol));
        let lift = attempt(|| lift_compatibility(tower, &family, i, j, &ybar, &v1, tol));
        let proj = attempt(|| projection_square(tower, &rep.clone()?, j, tol));
        let foot = attempt(|| {
            let rep = rep.clone()?;
            Ok(Outcome::compare_vec("pr_1 Psi vs pi", &trivialize(tower, &rep)?.0, &projection(tower, &rep)?, tol))
        });
        let linearity = attempt(|| {
            let base = projection(tower, &rep.clone()?)?;
            let psi = Trivialization::new(tower.alternate_chart(rng, i, &base), i);
            let fiber = |v: FinVec<S>| -> Result<FinVec<S>> {
                Ok(psi.apply(tower, &th(tower, &family, i, ybar.clone(), v)?)?.1)
            };
            let f1 = fiber(v1.clone())?;
            let f2 = fiber(v2.clone())?;
            Ok(Outcome::compare_vec("Psi(v1 + v2) vs Psi(v1) + Psi(v2)", &fiber(v1.add(&v2))?, &f1.add(&f2), tol)
                .and(Outcome::compare_vec("Psi(c v1) vs c Psi(v1)", &fiber(v1.scale(&c))?, &f1.scale(&c), tol)))
        });
        vec![
            ("square", square),
            ("equal-levels", equal),
            ("lift", lift),
            ("projection", proj),
            ("foot", foot),
            ("fiber-linearity", linearity),
        ]
    })
}

// ---- roundtrip ----

fn roundtrip<S: HarnessScalar, T: HarnessTower<S>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["limit-side", "intrinsic-side", "first-level", "rep-round-trip"];
    let tol = config.tol;
    run_trials(config, "roundtrip", CHECKS, S::EXACT, |rng, _| {
        let i = level(rng, config.dims);
        let rep = sample_rep(tower, rng, i);
        let n = level(rng, config.dims);
        let point = tower.sample_point(rng, n);
        let vector = tower.sample_tangent(rng, n, &point);
        let tangent = IntrinsicTangent::new(point, vector);
        let chart = tower.chart_for(&tangent.point);

        let (limit, intrinsic) = match &rep {
            Ok(rep) => {
                let report = prop2_roundtrip(tower, std::slice::from_ref(rep), &[(tangent.clone(), chart.clone())], tol);
                let detail = report.first_failure.clone().unwrap_or_default();
                (
                    holds(report.limit_failures == 0, || detail.clone()),
                    holds(report.intrinsic_failures == 0, || detail.clone()),
                )
            }
            Err(e) => (Outcome::from(e.clone()), Outcome::from(e.clone())),
        };
        let first = attempt(|| {
            let found = intrinsic_level(tower, &tangent, &chart)?;
            let support = tangent.point.degree().max(tangent.vector.degree());
            // first level whose ambient space holds the support
            let by_support = (1..=tower.max_level())
                .find(|&l| tower.ambient_dim(l) >= support)
                .unwrap_or(tower.max_level());
            let bound = by_support
                .max(tower.first_level(&tangent.point))
                .max(tower.chart_min_level(&chart));
            Ok(holds(found <= bound, || format!("{tangent} first lands at level {found} > {bound}")))
        });
        let rep_round_trip = attempt(|| {
            let rep = rep.clone()?;
            let back = from_intrinsic_at(tower, &to_intrinsic(tower, &rep)?, &rep.chart, rep.level)?;
            Ok(compare_reps("Th^-1 Th (r) vs r", &back, &rep, tol))
        });
        vec![
            ("limit-side", limit),
            ("intrinsic-side", intrinsic),
            ("first-level", first),
            ("rep-round-trip", rep_round_trip),
        ]
    })
}

// ---- sphere-only suites ----

/// Three charts with pairwise distinct, non-antipodal poles of `S^level`.
fn three_charts<S: HarnessScalar, T: HarnessTower<S, Chart = StereoChart<S>>>(
    tower: &T,
    rng: &mut TrialRng,
    level: usize,
) -> [StereoChart<S>; 3] {
    let mut poles: Vec<SpherePoint<S>> = Vec::with_capacity(3);
    while poles.len() < 3 {
        let p = SpherePoint::new(tower.sample_point(rng, level)).expect("sampled on the sphere");
        let clash = poles
            .iter()
            .any(|q| p.coords().weak_inner(q.coords()).to_f64().abs() > 1.0 - 1e-6);
        if !clash {
            poles.push(p);
        }
    }
    let mut sign = || if rng.random_bool(0.5) { Sign::Plus } else { Sign::Minus };
    let [a, b, c]: [SpherePoint<S>; 3] = poles.try_into().unwrap_or_else(|_| unreachable!("three poles"));
    [StereoChart::new(a, sign()), StereoChart::new(b, sign()), StereoChart::new(c, sign())]
}

/// A point of `S^level` at least [`MARGIN`] inside every chart domain.
fn common_foot<S: HarnessScalar, T: HarnessTower<S, Chart = StereoChart<S>>>(
    tower: &T,
    rng: &mut TrialRng,
    level: usize,
    charts: &[&StereoChart<S>],
) -> Result<FinVec<S>> {
    for _ in 0..FOOT_ATTEMPTS {
        let p = tower.sample_point(rng, level);
        if charts.iter().all(|c| denominator(c, &p) > MARGIN) {
            return Ok(p);
        }
    }
    Err(Error::OutsideChartDomain(format!(
        "no foot found inside all {} chart domains",
        charts.len()
    )))
}

fn cocycle<S: HarnessScalar, T: HarnessTower<S, Chart = StereoChart<S>>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["fiber-cocycle", "fiber-identity", "fiber-inverse", "coordinate-cocycle"];
    let tol = config.tol;
    run_trials(config, "cocycle", CHECKS, S::EXACT, |rng, _| {
        let i = level(rng, config.dims);
        let [a, b, c] = three_charts(tower, rng, i);
        let foot = common_foot(tower, rng, i, &[&a, &b, &c]);
        let id = GlInf::identity();

        let fibers = foot.clone().and_then(|p| {
            Ok((
                transition_fiber(tower, &a, &b, &p, i)?,
                transition_fiber(tower, &b, &a, &p, i)?,
                transition_fiber(tower, &b, &c, &p, i)?,
                transition_fiber(tower, &a, &c, &p, i)?,
                transition_fiber(tower, &a, &a, &p, i)?,
            ))
        });

        let fiber_cocycle = attempt(|| {
            let (ab, _, bc, ac, _) = fibers.clone()?;
            Ok(Outcome::compare_gl("T_BC T_AB vs T_AC", &bc.compose(&ab), &ac, tol))
        });
        let fiber_identity = attempt(|| {
            let (.., aa) = fibers.clone()?;
            // exact even in float mode
            Ok(Outcome::compare_gl("T_AA vs id", &aa, &id, 0.0).and(holds(aa.is_identity(), || format!("T_AA = {aa}"))))
        });
        let fiber_inverse = attempt(|| {
            let (ab, ba, ..) = fibers.clone()?;
            Ok(Outcome::compare_gl("T_AB T_BA vs id", &ab.compose(&ba), &id, tol))
        });
        let coordinate = attempt(|| {
            let p = foot.clone()?;
            let y = tower.chart_forward(&a, i, &p)?;
            let via = coordinate_transition(tower, &b, &c, i, &coordinate_transition(tower, &a, &b, i, &y)?)?;
            Ok(Outcome::compare_vec("u_C u_B^-1 u_B u_A^-1 vs u_C u_A^-1", &via, &coordinate_transition(tower, &a, &c, i, &y)?, tol))
        });
        vec![
            ("fiber-cocycle", fiber_cocycle),
            ("fiber-identity", fiber_identity),
            ("fiber-inverse", fiber_inverse),
            ("coordinate-cocycle", coordinate),
        ]
    })
}

fn tangency<S: HarnessScalar, T: HarnessTower<S, Chart = StereoChart<S>>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["orthogonal", "chart-change-class", "chart-change-orthogonal", "transition-action"];
    let tol = config.tol;
    run_trials(config, "tangency", CHECKS, S::EXACT, |rng, _| {
        let i = level(rng, config.dims);
        let setup = (|| -> Result<_> {
            let rep = sample_rep(tower, rng, i)?;
            let t = to_intrinsic(tower, &rep)?;
            let other = tower.alternate_chart(rng, i, &t.point);
            let moved = change_chart(tower, &rep, &other)?;
            Ok((rep, t, other, moved))
        })();

        let orthogonal = attempt(|| {
            let (_, t, _, _) = setup.clone()?;
            Ok(Outcome::compare_scalar("<x, v>", &t.sphere_defect(), &S::zero(), tol))
        });
        let class = attempt(|| {
            let (_, t, _, moved) = setup.clone()?;
            Ok(compare_tangents("tangent after chart change", &to_intrinsic(tower, &moved)?, &t, tol))
        });
        let moved_orthogonal = attempt(|| {
            let (_, _, _, moved) = setup.clone()?;
            let t = to_intrinsic(tower, &moved)?;
            Ok(Outcome::compare_scalar("<x, v> after chart change", &t.sphere_defect(), &S::zero(), tol))
        });
        let action = attempt(|| {
            let (rep, t, other, moved) = setup.clone()?;
            let g = transition_fiber(tower, &rep.chart, &other, &t.point, i)?;
            Ok(Outcome::compare_vec("T_AB fiber_A vs fiber_B", &g.apply(&rep.vel), &moved.vel, tol))
        });
        vec![
            ("orthogonal", orthogonal),
            ("chart-change-class", class),
            ("chart-change-orthogonal", moved_orthogonal),
            ("transition-action", action),
        ]
    })
}

/// Closed-form differentials against central differences; always in `f64`.
fn derivative<T: HarnessTower<f64, Chart = StereoChart<f64>>>(config: &SuiteConfig, tower: &T) -> Vec<CheckRecord> {
    const CHECKS: &[&str] = &["chart-differential", "inverse-differential", "level-differential", "transition-jacobian"];
    let rel = |label: &'static str, analytic: &FinVec<f64>, numeric: &FinVec<f64>| {
        Outcome::from_residual(relative_error(analytic, numeric), FD_REL_TOL, label)
            .with_context(|| format!("{analytic} vs {numeric}"))
    };
    run_trials(config, "derivative", CHECKS, false, |rng, _| {
        let i = level(rng, config.dims);
        let [a, b, _] = three_charts(tower, rng, i);
        let foot = common_foot(tower, rng, i, &[&a, &b]);
        let v_raw: FinVec<f64> = random_vec(rng, i + 1);
        let w_raw: FinVec<f64> = random_vec(rng, i + 1);
        let vbar: FinVec<f64> = random_vec(rng, i);

        let chart_diff = attempt(|| {
            let x = foot.clone()?;
            let v = sphere_tangent_projection(&x, &v_raw);
            let analytic = a.forward_diff(&x, &v)?;
            let numeric = directional_derivative(|p| a.forward_ambient(p), &x, &v, FD_STEP)?;
            Ok(rel("du(x) v", &analytic, &numeric))
        });
        let inverse_diff = attempt(|| {
            let x = foot.clone()?;
            let y = a.forward(&SpherePoint::new(x)?)?;
            let pole = a.pole().coords();
            let w = w_raw.sub(&pole.scale(&w_raw.weak_inner(pole)));
            let analytic = a.inverse_diff(&y, &w)?;
            let numeric = directional_derivative(|z| Ok(a.inverse(z)?.into_coords()), &y, &w, FD_STEP)?;
            Ok(rel("d(u^-1)(y) w", &analytic, &numeric))
        });
        let level_diff = attempt(|| {
            let ybar = tower.chart_forward(&a, i, &foot.clone()?)?;
            let analytic = tower.chart_inverse_diff(&a, i, &ybar, &vbar)?;
            let numeric = directional_derivative(|z| tower.chart_inverse(&a, i, z), &ybar, &vbar, FD_STEP)?;
            Ok(rel("dh_i(ybar) vbar", &analytic, &numeric))
        });
        let jacobian = attempt(|| {
            let p = foot.clone()?;
            let ybar = tower.chart_forward(&a, i, &p)?;
            let g = transition_fiber(tower, &a, &b, &p, i)?;
            let mut outcome = Outcome::from_residual(0.0, FD_REL_TOL, "transition jacobian");
            for k in 1..=tower.dim(i) {
                let column = FinVec::new((1..=tower.dim(i)).map(|r| g.entry(r, k)).collect());
                let numeric = directional_derivative(
                    |z| coordinate_transition(tower, &a, &b, i, z),
                    &ybar,
                    &FinVec::basis(k),
                    FD_STEP,
                )?;
                outcome = outcome.and(rel("transition jacobian column", &column, &numeric).with_context(|| format!("column {k}")));
            }
            Ok(outcome)
        });
        vec![
            ("chart-differential", chart_diff),
            ("inverse-differential", inverse_diff),
            ("level-differential", level_diff),
            ("transition-jacobian", jacobian),
        ]
    })
}
