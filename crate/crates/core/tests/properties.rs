mod common;

use common::*;
use proptest::prelude::*;

use tanlim::dirlim::coordinate_spaces;
use tanlim::tangent::{
    chart_compatibility, coordinate_transition, diagram_residual, lift_compatibility, phi_t, projection_square,
    th, to_intrinsic, Trivialization,
};
use tanlim::tower::{ManifoldTower, Sign, SpherePoint, SphereTower, StereoChart};
use tanlim::{q, FinVec, GlInf, Rational};

fn e1_plus() -> StereoChart<Rational> {
    StereoChart::plus(SpherePoint::basis(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // ---- finseq ----

    #[test]
    fn inclusion_preserves_inner_product(x in vec_up_to(16), y in vec_up_to(16), extra in 0usize..8) {
        let d = x.degree().max(y.degree()) + extra;
        prop_assert_eq!(x.include(d).unwrap().weak_inner(&y.include(d).unwrap()), x.weak_inner(&y));
    }

    #[test]
    fn inner_product_matches_loop_oracle(x in vec_up_to(16), y in vec_up_to(16)) {
        prop_assert_eq!(x.weak_inner(&y), loop_inner(&x, &y));
        prop_assert_eq!(x.weak_inner(&y), y.weak_inner(&x));
    }

    #[test]
    fn inner_product_is_bilinear(x in vec_up_to(10), y in vec_up_to(10), z in vec_up_to(10), a in rational(), b in rational()) {
        let lhs = x.scale(&a).add(&y.scale(&b)).weak_inner(&z);
        let rhs = a * x.weak_inner(&z) + b * y.weak_inner(&z);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn make_is_idempotent(coeffs in prop::collection::vec(rational(), 0..12), zeros in 0usize..4) {
        let mut padded = coeffs.clone();
        padded.extend(std::iter::repeat_n(q(0, 1), zeros));
        let v = FinVec::new(padded);
        prop_assert_eq!(FinVec::new(v.coeffs().to_vec()), v.clone());
        prop_assert!(v.coeffs().last().is_none_or(|c| *c != q(0, 1)));
    }

    #[test]
    fn degree_of_sum(x in vec_up_to(10), y in vec_up_to(10)) {
        let s = x.add(&y);
        prop_assert!(s.degree() <= x.degree().max(y.degree()));
        if x.degree() != y.degree() {
            prop_assert_eq!(s.degree(), x.degree().max(y.degree()));
        }
    }

    // ---- glinf ----

    #[test]
    fn group_axioms(g in gl(6), h in gl(6), k in gl(6)) {
        let id = GlInf::identity();
        prop_assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
        prop_assert_eq!(g.compose(&id), g.clone());
        prop_assert_eq!(id.compose(&g), g.clone());
        let inv = g.inverse().unwrap();
        prop_assert!(g.compose(&inv).is_identity());
        prop_assert!(inv.compose(&g).is_identity());
    }

    #[test]
    fn embedding_is_functorial(g in gl(6), h in gl(6), m in 0usize..4, k in 0usize..4) {
        let n = g.size().max(h.size());
        let (m, k) = (n + m, n + m + k);
        prop_assert_eq!(g.embed(m).unwrap().embed(k).unwrap(), g.embed(k).unwrap());
        prop_assert_eq!(g.embed(m).unwrap().compose(&h.embed(m).unwrap()), g.compose(&h).embed(m).unwrap());
    }

    #[test]
    fn action_is_compatible(g in gl(6), h in gl(6), v in vec_up_to(9), extra in 0usize..3) {
        prop_assert_eq!(g.compose(&h).apply(&v), g.apply(&h.apply(&v)));
        let d = g.size().max(v.degree()) + extra;
        prop_assert_eq!(g.apply(&v.include(d).unwrap()), g.embed(d).unwrap().apply(&v));
    }

    #[test]
    fn canonicalization_is_sound(g in gl(6), extra in 0usize..3) {
        let block = g.padded_block(g.size() + extra);
        prop_assert_eq!(GlInf::from_block(block).unwrap(), g);
    }

    // ---- dirlim ----

    #[test]
    fn limit_equivalence_laws(x in vec_up_to(4), i in 4usize..6, j in 0usize..5, k in 0usize..5) {
        let sys = coordinate_spaces::<Rational>(16);
        let (j, k) = (i + j, i + j + k);
        let a = sys.inject(i, x.clone()).unwrap();
        let b = sys.inject(j, sys.bond(i, j, &x).unwrap()).unwrap();
        let c = sys.inject(k, sys.bond(i, k, &x).unwrap()).unwrap();
        prop_assert!(sys.equivalent(&a, &a).unwrap());
        prop_assert!(sys.equivalent(&a, &b).unwrap() && sys.equivalent(&b, &a).unwrap());
        prop_assert!(sys.equivalent(&b, &c).unwrap() && sys.equivalent(&a, &c).unwrap());
        prop_assert_eq!(a.level(), x.degree().max(1));
    }

    #[test]
    fn inject_is_injective(x in vec_up_to(5), y in vec_up_to(5)) {
        let sys = coordinate_spaces::<Rational>(8);
        let a = sys.inject(5, x.clone()).unwrap();
        let b = sys.inject(8, y.clone()).unwrap();
        prop_assert_eq!(sys.equivalent(&a, &b).unwrap(), x == y);
    }

    #[test]
    fn universal_map_factors(x in vec_up_to(6), i in 6usize..9) {
        let sys = coordinate_spaces::<Rational>(12);
        let check: Vec<(usize, FinVec<Rational>)> = vec![(6, x.clone()), (i, x.clone())];
        let psi = sys.universal_map(|_, v: &FinVec<Rational>| v.get(1), &check).unwrap();
        let lim = sys.inject(i, x.clone()).unwrap();
        prop_assert_eq!(psi.apply(&lim).unwrap(), x.get(1));
    }

    // ---- tower ----

    #[test]
    fn chart_round_trip_exact(pole in sphere_point(5), x in sphere_point(5), plus in any::<bool>()) {
        let chart = StereoChart::new(pole, if plus { Sign::Plus } else { Sign::Minus });
        prop_assume!(x.coords() != &chart.centre());
        let y = chart.forward(&x).unwrap();
        prop_assert_eq!(y.weak_inner(chart.pole().coords()), q(0, 1));
        prop_assert_eq!(chart.inverse(&y).unwrap(), x);
    }

    #[test]
    fn chart_inverse_lands_on_sphere(y in vec_up_to(8)) {
        let chart = e1_plus();
        let x = chart.inverse(&chart.from_coords(&y)).unwrap();
        prop_assert_eq!(x.coords().norm_sq(), q(1, 1));
        prop_assert_eq!(chart.to_coords(&chart.forward(&x).unwrap()), y);
    }

    #[test]
    fn coordinate_cocycle_exact(a in sphere_point(3), b in sphere_point(3), c in sphere_point(3), x in sphere_point(3)) {
        let charts = [StereoChart::plus(a), StereoChart::minus(b), StereoChart::plus(c)];
        prop_assume!(charts.iter().all(|ch| x.coords() != &ch.centre()));
        prop_assume!(charts[0] != charts[1] && charts[1] != charts[2] && charts[0] != charts[2]);
        let t = SphereTower::new(4);
        let y = t.chart_forward(&charts[0], 3, x.coords()).unwrap();
        let ab = coordinate_transition(&t, &charts[0], &charts[1], 3, &y).unwrap();
        let via = coordinate_transition(&t, &charts[1], &charts[2], 3, &ab).unwrap();
        prop_assert_eq!(via, coordinate_transition(&t, &charts[0], &charts[2], 3, &y).unwrap());
    }

    #[test]
    fn transition_natural_under_inclusion(y in vec_of_len(3), extra in 1usize..5) {
        prop_assume!(!y.is_zero());
        let t = SphereTower::new(10);
        let (a, b) = (e1_plus(), e1_plus().opposite());
        let j = 3 + extra;
        let low = coordinate_transition(&t, &a, &b, 3, &y).unwrap();
        let high = coordinate_transition(&t, &a, &b, j, &t.coord_bond(3, j, &y).unwrap()).unwrap();
        prop_assert_eq!(low.clone(), high);
        prop_assert_eq!(low, y.scale(&(q(1, 1) / y.norm_sq())));
    }

    #[test]
    fn chart_families_commute_with_bonds(y in vec_of_len(3), j in 3usize..9) {
        let t = SphereTower::new(8);
        prop_assert!(chart_compatibility(&t, &e1_plus(), 3, j, &y, 0.0).unwrap().pass);
    }

    // ---- tangent ----

    #[test]
    fn tangent_bonding_is_functorial(y in vec_of_len(3), v in vec_of_len(3), j in 3usize..6, k in 0usize..3) {
        let t = SphereTower::new(8);
        let rep = th(&t, &e1_plus(), 3, y, v).unwrap();
        prop_assert_eq!(phi_t(&t, &rep, 3).unwrap(), rep.clone());
        let k = j + k;
        prop_assert_eq!(phi_t(&t, &phi_t(&t, &rep, j).unwrap(), k).unwrap(), phi_t(&t, &rep, k).unwrap());
    }

    #[test]
    fn squares_commute_exactly(y in vec_of_len(3), v in vec_of_len(3), j in 3usize..9) {
        let t = SphereTower::new(8);
        let rep = th(&t, &e1_plus(), 3, y.clone(), v.clone()).unwrap();
        prop_assert!(diagram_residual(&t, &rep, j, 0.0).unwrap().pass);
        prop_assert!(lift_compatibility(&t, &e1_plus(), 3, j, &y, &v, 0.0).unwrap().pass);
        prop_assert!(projection_square(&t, &rep, j, 0.0).unwrap().pass);
    }

    #[test]
    fn trivialization_is_fiberwise_linear(y in vec_of_len(3), v in vec_of_len(3), w in vec_of_len(3), c in rational(), pole in sphere_point(3)) {
        let t = SphereTower::new(4);
        let foot = t.chart_inverse(&e1_plus(), 3, &y).unwrap();
        let sign = if foot.weak_inner(pole.coords()) < q(0, 1) { Sign::Plus } else { Sign::Minus };
        let psi = Trivialization::new(StereoChart::new(pole, sign), 3);
        let fiber = |vel: FinVec<Rational>| psi.apply(&t, &th(&t, &e1_plus(), 3, y.clone(), vel).unwrap()).unwrap().1;
        prop_assert_eq!(fiber(v.add(&w)), fiber(v.clone()).add(&fiber(w.clone())));
        prop_assert_eq!(fiber(v.scale(&c)), fiber(v).scale(&c));
    }

    #[test]
    fn ambient_tangents_are_orthogonal(y in vec_of_len(4), v in vec_of_len(4)) {
        let t = SphereTower::new(4);
        let it = to_intrinsic(&t, &th(&t, &e1_plus(), 4, y, v).unwrap()).unwrap();
        prop_assert_eq!(it.sphere_defect(), q(0, 1));
    }
}
