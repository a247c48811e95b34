//! Tangent bundles of direct limits of finite-dimensional manifolds, at
//! finite truncation.
//!
//! The crate builds the objects bottom-up:
//!
//! * [`finseq`]: finitely supported sequences, the model space of every limit;
//! * [`dirlim`]: a generic engine for direct limits of sequences of sets;
//! * [`glinf`]: the stable general linear group, the structure group;
//! * [`tower`]: towers of manifolds with compatible charts, chiefly the
//!   sphere tower `S^1 -> S^2 -> ...` with stereographic charts;
//! * [`tangent`]: tangent representatives, trivializations, fiber
//!   transitions and the compatibility checks between levels;
//! * [`harness`]: seeded property suites and their reports, driven by the
//!   `tanlim` binary.
//!
//! Identities that should hold exactly are checked with exact rationals
//! ([`Rational`]); chart numerics and finite differences use `f64` with an
//! explicit tolerance. The guide in `book/` walks through each layer with
//! runnable examples.

pub mod dirlim;
pub mod error;
pub mod finseq;
pub mod glinf;
pub mod harness;
pub mod outcome;
pub mod sampling;
pub mod scalar;
pub mod tangent;
pub mod tower;

pub use error::{Error, Result};
pub use finseq::FinVec;
pub use glinf::GlInf;
pub use scalar::{q, Rational, Scalar};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/finite-sequences.md")]
    mod finite_sequences {}
    #[doc = include_str!("../../../book/src/direct-limits.md")]
    mod direct_limits {}
    #[doc = include_str!("../../../book/src/stable-linear-group.md")]
    mod stable_linear_group {}
    #[doc = include_str!("../../../book/src/sphere-tower.md")]
    mod sphere_tower {}
    #[doc = include_str!("../../../book/src/tangent-bundle.md")]
    mod tangent_bundle {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
