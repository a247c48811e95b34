//! Direct limits of sequences of sets.
//!
//! A [`DirectedSystem`] is a sequence of objects `X_min, ..., X_max` (a finite
//! truncation of an `N`-indexed sequence) together with bonding maps
//! `eps_ij: X_i -> X_j` for `i <= j`. Its limit is the disjoint union of the
//! `X_i` modulo `(i, x) ~ (j, eps_ij(x))`; a [`LimitElement`] is one class.
//!
//! Elements are opaque to the engine. Everything it proves about a system
//! (the bonding laws, cone conditions, injectivity) is checked on finite
//! sample sets and reported as such.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::scalar::Scalar;

type BondFn<E> = dyn Fn(usize, usize, &E) -> E + Send + Sync;
type MemberFn<E> = dyn Fn(usize, &E) -> bool + Send + Sync;
type PreimageFn<E> = dyn Fn(usize, usize, &E) -> Option<E> + Send + Sync;
type ConeFn<E, T> = dyn Fn(usize, &E) -> T + Send + Sync;

static NEXT_SYSTEM_ID: AtomicU64 = AtomicU64::new(1);

/// A directed sequence of objects with evaluable bonding maps.
///
/// Bonding maps must be pure. Clones share identity with the original: a
/// limit element of one can be compared against elements of the other.
pub struct DirectedSystem<E> {
    id: u64,
    name: String,
    min_level: usize,
    max_level: usize,
    bond: Arc<BondFn<E>>,
    member: Option<Arc<MemberFn<E>>>,
    preimage: Option<Arc<PreimageFn<E>>>,
    injective: bool,
}

impl<E> Clone for DirectedSystem<E> {
    fn clone(&self) -> Self {
        DirectedSystem {
            id: self.id,
            name: self.name.clone(),
            min_level: self.min_level,
            max_level: self.max_level,
            bond: Arc::clone(&self.bond),
            member: self.member.clone(),
            preimage: self.preimage.clone(),
            injective: self.injective,
        }
    }
}

impl<E> fmt::Debug for DirectedSystem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedSystem")
            .field("name", &self.name)
            .field("levels", &(self.min_level..=self.max_level))
            .field("injective", &self.injective)
            .finish_non_exhaustive()
    }
}

/// The class of `(level, rep)` in the limit.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitElement<E> {
    system: u64,
    level: usize,
    rep: E,
}

impl<E> LimitElement<E> {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn rep(&self) -> &E {
        &self.rep
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Violation {
    /// `eps_ii(x) != x`
    Identity { sample: usize, i: usize },
    /// `eps_jk(eps_ij(x)) != eps_ik(x)`
    Composition {
        sample: usize,
        i: usize,
        j: usize,
        k: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub seed: Option<u64>,
    pub identity_checks: usize,
    pub composition_checks: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

impl<E: Clone + PartialEq + Send + Sync + 'static> DirectedSystem<E> {
    pub fn new(
        name: impl Into<String>,
        levels: RangeInclusive<usize>,
        bond: impl Fn(usize, usize, &E) -> E + Send + Sync + 'static,
    ) -> Self {
        DirectedSystem {
            id: NEXT_SYSTEM_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            min_level: *levels.start(),
            max_level: *levels.end(),
            bond: Arc::new(bond),
            member: None,
            preimage: None,
            injective: false,
        }
    }

    /// Declares that every bonding map is injective.
    pub fn injective(mut self, injective: bool) -> Self {
        self.injective = injective;
        self
    }

    /// Supplies a test for `x in X_i`, used to reject malformed samples.
    pub fn with_membership(mut self, member: impl Fn(usize, &E) -> bool + Send + Sync + 'static) -> Self {
        self.member = Some(Arc::new(member));
        self
    }

    /// Supplies `preimage(j, i, y)`: the `x in X_i` with `eps_ij(x) = y`, if
    /// one exists. Enables canonical minimal-level representatives.
    pub fn with_preimage(
        mut self,
        preimage: impl Fn(usize, usize, &E) -> Option<E> + Send + Sync + 'static,
    ) -> Self {
        self.preimage = Some(Arc::new(preimage));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> RangeInclusive<usize> {
        self.min_level..=self.max_level
    }

    pub fn is_injective(&self) -> bool {
        self.injective
    }

    fn check_level(&self, index: usize) -> Result<()> {
        if index < self.min_level || index > self.max_level {
            return Err(Error::IndexOutOfRange {
                index,
                min: self.min_level,
                max: self.max_level,
            });
        }
        Ok(())
    }

    fn check_member(&self, i: usize, x: &E) -> Result<()> {
        match &self.member {
            Some(member) if !member(i, x) => Err(Error::EvaluationFailure(format!(
                "sample is not an element of object {i} of `{}`",
                self.name
            ))),
            _ => Ok(()),
        }
    }

    /// Evaluates `eps_ij(x)`.
    pub fn bond(&self, i: usize, j: usize, x: &E) -> Result<E> {
        self.check_level(i)?;
        self.check_level(j)?;
        if j < i {
            return Err(Error::LevelDecrease { from: i, to: j });
        }
        Ok((self.bond)(i, j, x))
    }

    /// The canonical map `eps_i: X_i -> lim X`.
    pub fn inject(&self, i: usize, x: E) -> Result<LimitElement<E>> {
        self.check_level(i)?;
        self.check_member(i, &x)?;
        let mut level = i;
        let mut rep = x;
        if let Some(preimage) = &self.preimage {
            while level > self.min_level {
                match preimage(level, level - 1, &rep) {
                    Some(lower) => {
                        rep = lower;
                        level -= 1;
                    }
                    None => break,
                }
            }
        }
        Ok(LimitElement {
            system: self.id,
            level,
            rep,
        })
    }

    fn owns(&self, a: &LimitElement<E>) -> Result<()> {
        if a.system != self.id {
            return Err(Error::SystemMismatch);
        }
        Ok(())
    }

    /// Decides `a ~ b` by pushing both representatives to the higher level.
    pub fn equivalent(&self, a: &LimitElement<E>, b: &LimitElement<E>) -> Result<bool> {
        self.owns(a)?;
        self.owns(b)?;
        let top = a.level.max(b.level);
        let pa = (self.bond)(a.level, top, &a.rep);
        let pb = (self.bond)(b.level, top, &b.rep);
        Ok(pa == pb)
    }

    /// Checks `eps_ii = id` and `eps_jk . eps_ij = eps_ik` on every sample,
    /// for all `i <= j <= k` up to the top level.
    pub fn validate(&self, samples: &[(usize, E)]) -> Result<ValidationReport> {
        let mut report = ValidationReport {
            samples: samples.len(),
            ..Default::default()
        };
        for (s, (i, x)) in samples.iter().enumerate() {
            let i = *i;
            self.check_level(i)?;
            report.identity_checks += 1;
            if (self.bond)(i, i, x) != *x {
                report.violations.push(Violation::Identity { sample: s, i });
            }
            for j in i..=self.max_level {
                let xj = (self.bond)(i, j, x);
                for k in j..=self.max_level {
                    report.composition_checks += 1;
                    if (self.bond)(j, k, &xj) != (self.bond)(i, k, x) {
                        report
                            .violations
                            .push(Violation::Composition { sample: s, i, j, k });
                    }
                }
            }
        }
        Ok(report)
    }

    /// Builds the induced map out of the limit for a cone `psi_i: X_i -> T`.
    ///
    /// The cone condition `psi_j . eps_ij = psi_i` is verified on
    /// `check_samples` for every `j >= i`; the first failure is returned.
    pub fn universal_map<T, F>(&self, cone: F, check_samples: &[(usize, E)]) -> Result<UniversalMap<E, T>>
    where
        T: PartialEq,
        F: Fn(usize, &E) -> T + Send + Sync + 'static,
    {
        for (s, (i, x)) in check_samples.iter().enumerate() {
            let i = *i;
            self.check_level(i)?;
            let base = cone(i, x);
            for j in i..=self.max_level {
                if cone(j, &(self.bond)(i, j, x)) != base {
                    return Err(Error::ConeConditionViolated { i, j, sample: s });
                }
            }
        }
        Ok(UniversalMap {
            system: self.id,
            cone: Arc::new(cone),
        })
    }

    /// Finds pairs of distinct same-level samples that collide in the limit.
    ///
    /// For a system flagged injective, an empty result is the finite
    /// stand-in for each `eps_i` being an embedding.
    pub fn injectivity_collisions(&self, samples: &[(usize, E)]) -> Result<Vec<(usize, usize)>> {
        let injected = samples
            .iter()
            .map(|(i, x)| self.inject(*i, x.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut collisions = Vec::new();
        for a in 0..samples.len() {
            for b in a + 1..samples.len() {
                if samples[a].0 == samples[b].0
                    && samples[a].1 != samples[b].1
                    && self.equivalent(&injected[a], &injected[b])?
                {
                    collisions.push((a, b));
                }
            }
        }
        Ok(collisions)
    }
}

/// The unique map out of the limit induced by a verified cone.
pub struct UniversalMap<E, T> {
    system: u64,
    cone: Arc<ConeFn<E, T>>,
}

impl<E, T> UniversalMap<E, T> {
    pub fn apply(&self, x: &LimitElement<E>) -> Result<T> {
        if x.system != self.system {
            return Err(Error::SystemMismatch);
        }
        Ok((self.cone)(x.level, &x.rep))
    }
}

/// The tower `R^1 -> R^2 -> ... -> R^max_dim` under zero padding.
pub fn coordinate_spaces<S: Scalar>(max_dim: usize) -> DirectedSystem<FinVec<S>> {
    DirectedSystem::new("coordinate-spaces", 1..=max_dim, |_, j, x: &FinVec<S>| {
        x.include(j).expect("bonding map applied to a member of X_i")
    })
    .injective(true)
    .with_membership(|i, x: &FinVec<S>| x.degree() <= i)
    .with_preimage(|_, i, y: &FinVec<S>| (y.degree() <= i).then(|| y.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    type V = FinVec<Rational>;

    fn pad_with_flip(i: usize, j: usize, x: &V) -> V {
        if (i, j) == (2, 3) {
            x.neg()
        } else {
            x.clone()
        }
    }

    #[test]
    fn coordinate_tower_validates() {
        let sys = coordinate_spaces::<Rational>(8);
        let samples: Vec<_> = (1..=8).map(|i| (i, V::basis(i))).collect();
        let report = sys.validate(&samples).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.samples, 8);
    }

    #[test]
    fn corrupted_bond_is_reported() {
        let sys = DirectedSystem::new("corrupt", 1..=4, pad_with_flip);
        let report = sys.validate(&[(1, V::basis(1))]).unwrap();
        assert!(report.violations.contains(&Violation::Composition {
            sample: 0,
            i: 1,
            j: 2,
            k: 3
        }));
        // the composite really differs on e_1
        let via = sys.bond(2, 3, &sys.bond(1, 2, &V::basis(1)).unwrap()).unwrap();
        assert_ne!(via, sys.bond(1, 3, &V::basis(1)).unwrap());
    }

    #[test]
    fn empty_samples_give_empty_report() {
        let sys = coordinate_spaces::<Rational>(4);
        let report = sys.validate(&[]).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.samples, 0);
    }

    #[test]
    fn validate_rejects_unknown_index() {
        let sys = coordinate_spaces::<Rational>(4);
        assert!(matches!(
            sys.validate(&[(5, V::zero())]),
            Err(Error::IndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn inject_examples() {
        let sys = coordinate_spaces::<Rational>(4);
        let x = V::from_i64s(&[1, 2]);
        let a = sys.inject(2, x.clone()).unwrap();
        assert_eq!(a.level(), 2);
        assert_eq!(a.rep(), &x);
        let b = sys.inject(3, sys.bond(2, 3, &x).unwrap()).unwrap();
        assert!(sys.equivalent(&a, &b).unwrap());
        // canonical minimal level
        assert_eq!(b.level(), 2);
        assert!(matches!(
            sys.inject(5, x),
            Err(Error::IndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn inject_keeps_level_without_preimage() {
        let sys = DirectedSystem::new("plain", 1..=4, |_, _, x: &V| x.clone());
        let a = sys.inject(3, V::basis(1)).unwrap();
        assert_eq!(a.level(), 3);
        let b = sys.inject(1, V::basis(1)).unwrap();
        assert!(sys.equivalent(&a, &b).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let sys = coordinate_spaces::<Rational>(4);
        let a = sys.inject(2, V::from_i64s(&[1, 2])).unwrap();
        let b = sys.inject(4, V::from_i64s(&[1, 2, 0, 0])).unwrap();
        let c = sys.inject(2, V::from_i64s(&[1, 3])).unwrap();
        assert!(sys.equivalent(&a, &b).unwrap());
        assert!(!sys.equivalent(&a, &c).unwrap());
    }

    #[test]
    fn elements_of_different_systems_do_not_compare() {
        let s1 = coordinate_spaces::<Rational>(4);
        let s2 = coordinate_spaces::<Rational>(4);
        let a = s1.inject(1, V::basis(1)).unwrap();
        let b = s2.inject(1, V::basis(1)).unwrap();
        assert_eq!(s1.equivalent(&a, &b), Err(Error::SystemMismatch));
        // a clone is the same system
        let s1c = s1.clone();
        let c = s1c.inject(1, V::basis(1)).unwrap();
        assert!(s1.equivalent(&a, &c).unwrap());
    }

    #[test]
    fn universal_map_of_inclusions_is_identity() {
        let sys = coordinate_spaces::<Rational>(6);
        let samples: Vec<_> = (1..=6).map(|i| (i, V::basis(i).scale(&q(3, 2)))).collect();
        let psi = sys.universal_map(|_, x: &V| x.clone(), &samples).unwrap();
        for (i, x) in &samples {
            let el = sys.inject(*i, x.clone()).unwrap();
            assert_eq!(&psi.apply(&el).unwrap(), x);
        }
    }

    #[test]
    fn corrupted_cone_is_rejected() {
        let sys = coordinate_spaces::<Rational>(4);
        let samples = vec![(1, V::basis(1))];
        let err = sys
            .universal_map(
                |i, x: &V| {
                    let v = x.weak_inner(&V::basis(1));
                    if i == 2 {
                        v + q(1, 1)
                    } else {
                        v
                    }
                },
                &samples,
            )
            .err()
            .unwrap();
        assert_eq!(err, Error::ConeConditionViolated { i: 1, j: 2, sample: 0 });
    }

    #[test]
    fn injectivity_proxy() {
        let sys = coordinate_spaces::<Rational>(4);
        let samples = vec![(2, V::basis(1)), (2, V::basis(2)), (3, V::basis(3))];
        assert!(sys.injectivity_collisions(&samples).unwrap().is_empty());
        // a collapsing system is caught
        let collapse = DirectedSystem::new("collapse", 1..=3, |_, _, x: &V| x.truncate(1));
        let samples = vec![(2, V::from_i64s(&[1, 1])), (2, V::from_i64s(&[1, 2]))];
        assert_eq!(collapse.injectivity_collisions(&samples).unwrap(), vec![(0, 1)]);
    }
}
