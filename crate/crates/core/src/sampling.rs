//! Deterministic random inputs for the property suites.
//!
//! Each trial draws from its own ChaCha stream whose seed is a stable hash
//! of `(master seed, suite id, trial index)`; results therefore do not depend
//! on scheduling or on how many trials other suites ran.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finseq::FinVec;
use crate::glinf::GlInf;
use crate::scalar::{Rational, Scalar};

pub type TrialRng = ChaCha8Rng;

/// FNV-1a over `(master, suite, trial)`. Stable across platforms and releases.
pub fn derive_seed(master: u64, suite: &str, trial: u64) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let bytes = master
        .to_le_bytes()
        .into_iter()
        .chain(suite.bytes())
        .chain([0xff])
        .chain(trial.to_le_bytes());
    bytes.fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

pub fn trial_rng(master: u64, suite: &str, trial: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, suite, trial))
}

/// Scalars that can be drawn at desk scale.
pub trait SampleScalar: Scalar {
    /// A small value: `p/q` with `|p| <= 6`, `1 <= q <= 4` for rationals,
    /// uniform on `[-2, 2]` for floats.
    fn sample_small<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl SampleScalar for Rational {
    fn sample_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let p: i64 = rng.random_range(-6..=6);
        let q: i64 = rng.random_range(1..=4);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
}

impl SampleScalar for f64 {
    fn sample_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random_range(-2.0..=2.0)
    }
}

/// `n` small coordinates (the canonical form may be shorter).
pub fn random_vec<S: SampleScalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinVec<S> {
    FinVec::new((0..n).map(|_| S::sample_small(rng)).collect())
}

/// Like [`random_vec`] but with the last of the `n` coordinates nonzero.
pub fn random_full_vec<S: SampleScalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinVec<S> {
    loop {
        let v = random_vec(rng, n);
        if v.degree() == n {
            return v;
        }
    }
}

/// A random invertible element with block size at most `max_n`.
///
/// Entries are small integers (rationals) or uniform floats; singular draws
/// are rejected and redrawn.
pub fn random_gl<S: SampleScalar, R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> GlInf<S> {
    let n = rng.random_range(0..=max_n);
    loop {
        let rows: Vec<Vec<S>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if S::EXACT {
                            S::from_i64(rng.random_range(-3..=3))
                        } else {
                            S::sample_small(rng)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Ok(g) = GlInf::from_block(rows) {
            return g;
        }
    }
}
