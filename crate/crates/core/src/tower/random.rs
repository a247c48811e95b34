use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::finseq::FinVec;
use crate::sampling::{random_vec, SampleScalar};

use super::stereo::{SpherePoint, StereoChart};

/// A point of `S^dim` (coordinates `1..=dim+1`), uniformly distributed and
/// fully determined by `(dim, seed)`.
pub fn random_sphere_point(dim: usize, seed: u64) -> SpherePoint<f64> {
    assert!(dim >= 1, "spheres start at S^1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = FinVec::new((0..=dim).map(|_| rng.sample(StandardNormal)).collect());
        if v.norm_sq() > 1e-12 {
            return SpherePoint::<f64>::normalize(v).expect("nonzero vector");
        }
    }
}

/// A point of `S^dim` with exact coordinates: the inverse `e_1`-chart image
/// of a random small vector of `R^dim`.
pub fn random_rational_sphere_point<S: SampleScalar, R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SpherePoint<S> {
    let chart = StereoChart::plus(SpherePoint::basis(1));
    let ybar: FinVec<S> = random_vec(rng, dim);
    chart
        .inverse(&chart.from_coords(&ybar))
        .expect("every point of e_1-perp is in the image of u+^{-1}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::trial_rng;
    use crate::scalar::{Rational, Scalar};

    #[test]
    fn deterministic_for_fixed_seed() {
        assert_eq!(random_sphere_point(5, 9), random_sphere_point(5, 9));
        assert_ne!(random_sphere_point(5, 9), random_sphere_point(5, 10));
    }

    #[test]
    fn circle_support() {
        for seed in 0..20 {
            assert!(random_sphere_point(1, seed).coords().degree() <= 2);
        }
    }

    #[test]
    fn normalized_within_tolerance() {
        for seed in 0..1000 {
            let x = random_sphere_point(8, seed);
            assert!((x.coords().norm_sq() - 1.0).abs() <= 1e-12);
            assert!(x.coords().degree() <= 9);
        }
    }

    #[test]
    fn rational_points_are_exactly_on_the_sphere() {
        let mut rng = trial_rng(1, "sphere", 0);
        for dim in 1..=8 {
            let x: SpherePoint<Rational> = random_rational_sphere_point(&mut rng, dim);
            assert_eq!(x.coords().norm_sq(), <Rational as Scalar>::one());
            assert!(x.coords().degree() <= dim + 1);
        }
    }
}
