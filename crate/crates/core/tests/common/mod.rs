#![allow(dead_code)]

use proptest::prelude::*;

use tanlim::tower::{SpherePoint, StereoChart};
use tanlim::{q, FinVec, GlInf, Rational};

pub type V = FinVec<Rational>;
pub type G = GlInf<Rational>;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, d)| q(p, d))
}

pub fn vec_of_len(len: usize) -> impl Strategy<Value = V> {
    prop::collection::vec(rational(), len).prop_map(FinVec::new)
}

pub fn vec_up_to(max_len: usize) -> impl Strategy<Value = V> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(FinVec::new)
}

/// Invertible elements with small integer blocks of size `0..=max_n`.
pub fn gl(max_n: usize) -> impl Strategy<Value = G> {
    (0..=max_n)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
        .prop_filter_map("singular block", |rows| {
            GlInf::from_block(rows.into_iter().map(|r| r.into_iter().map(|x| q(x, 1)).collect()).collect()).ok()
        })
}

/// An exact point of `S^dim`: the inverse `e_1`-chart image of a small
/// integer vector.
pub fn sphere_point(dim: usize) -> impl Strategy<Value = SpherePoint<Rational>> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|ys| {
        let chart = StereoChart::plus(SpherePoint::basis(1));
        let ybar = FinVec::new(ys.into_iter().map(|y| q(y, 1)).collect());
        chart.inverse(&chart.from_coords(&ybar)).unwrap()
    })
}

/// The oracle for `<x, y>`: a loop over zero-padded plain arrays.
pub fn loop_inner(x: &V, y: &V) -> Rational {
    let n = x.degree().max(y.degree());
    let (a, b) = (x.padded(n), y.padded(n));
    let mut acc = q(0, 1);
    for k in 0..n {
        acc += a[k].clone() * b[k].clone();
    }
    acc
}
