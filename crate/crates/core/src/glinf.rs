//! The stable general linear group: invertible infinite matrices that agree
//! with the identity outside a finite leading block.
//!
//! A [`GlInf`] stores only that block, trimmed to the smallest size whose
//! complement is the identity pattern. With this normal form the inclusions
//! `GL(R^n) -> GL(R^m)` are the identity on stored data and equality of group
//! elements is equality of blocks.

use std::fmt;

use crate::dirlim::DirectedSystem;
use crate::error::{Error, Result};
use crate::finseq::FinVec;
use crate::scalar::Scalar;

/// Relative pivot threshold for float-mode inversion.
pub const FLOAT_PIVOT_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct GlInf<S> {
    n: usize,
    /// Row-major `n x n`.
    block: Vec<S>,
}

impl<S: Scalar> GlInf<S> {
    pub fn identity() -> Self {
        GlInf {
            n: 0,
            block: Vec::new(),
        }
    }

    /// Builds a group element from a square leading block.
    pub fn from_block(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let block: Vec<S> = rows.into_iter().flatten().collect();
        invert(n, &block).map_err(|_| Error::Singular)?;
        Ok(Self::canonical(n, block))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_block(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    /// Diagonal element `diag(d_1, ..., d_n)`.
    pub fn diagonal(entries: Vec<S>) -> Result<Self> {
        let n = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                let mut row = vec![S::zero(); n];
                row[i] = d;
                row
            })
            .collect();
        Self::from_block(rows)
    }

    fn canonical(mut n: usize, block: Vec<S>) -> Self {
        let width = n;
        let at = |r: usize, c: usize| &block[r * width + c];
        while n > 0 {
            let k = n - 1;
            let trivial = (0..n).all(|c| {
                let want_one = c == k;
                let row_ok = if want_one { at(k, c) == &S::one() } else { at(k, c).is_zero() };
                let col_ok = if want_one { true } else { at(c, k).is_zero() };
                row_ok && col_ok
            });
            if !trivial {
                break;
            }
            n -= 1;
        }
        let block = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| at(r, c).clone())
            .collect();
        GlInf { n, block }
    }

    /// Size of the canonical leading block.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.n == 0
    }

    /// Entry `(i, j)` of the infinite matrix, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> S {
        assert!(i >= 1 && j >= 1, "matrix entries are indexed from 1");
        if i <= self.n && j <= self.n {
            self.block[(i - 1) * self.n + (j - 1)].clone()
        } else if i == j {
            S::one()
        } else {
            S::zero()
        }
    }

    /// The leading `m x m` block of the infinite matrix.
    pub fn padded_block(&self, m: usize) -> Vec<Vec<S>> {
        (1..=m)
            .map(|i| (1..=m).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// The inclusion `GL(R^n) -> GL(R^m)`; validates `m` only.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if self.n > m {
            return Err(Error::AmbientTooSmall {
                degree: self.n,
                ambient: m,
            });
        }
        Ok(self.clone())
    }

    /// The group law `self . other`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.n.max(other.n);
        let a = flat(&self.padded_block(m));
        let b = flat(&other.padded_block(m));
        let mut out = Vec::with_capacity(m * m);
        for r in 0..m {
            for c in 0..m {
                let mut acc = S::zero();
                for k in 0..m {
                    let x = &a[r * m + k];
                    let y = &b[k * m + c];
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc + x.clone() * y.clone();
                    }
                }
                out.push(acc);
            }
        }
        Self::canonical(m, out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = invert(self.n, &self.block)?;
        Ok(Self::canonical(self.n, inv))
    }

    /// Matrix action on a finitely supported vector. Coordinates past the
    /// block pass through unchanged.
    pub fn apply(&self, v: &FinVec<S>) -> FinVec<S> {
        let n = self.n;
        let head = v.padded(n);
        let mut out: Vec<S> = (0..n)
            .map(|r| {
                (0..n).fold(S::zero(), |acc, c| {
                    acc + self.block[r * n + c].clone() * head[c].clone()
                })
            })
            .collect();
        out.extend(v.coeffs().iter().skip(n).cloned());
        FinVec::new(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let m = self.n.max(other.n);
        let mut worst = 0.0f64;
        for i in 1..=m {
            for j in 1..=m {
                worst = worst.max((self.entry(i, j) - other.entry(i, j)).abs_f64());
            }
        }
        worst
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.block.iter().map(Scalar::abs_f64).fold(1.0, f64::max)
    }

    /// Exact equality in exact mode; entrywise `tol` in float mode.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if S::EXACT {
            self == other
        } else {
            self.max_abs_diff(other) <= tol
        }
    }

    pub fn to_f64(&self) -> GlInf<f64> {
        GlInf {
            n: self.n,
            block: self.block.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Parses rows separated by `;` and entries by `,`, e.g. `0,-1;1,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(Self::identity());
        }
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(S::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_block(rows)
    }
}

impl<S: Scalar> fmt::Display for GlInf<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 0 {
            return write!(f, "I");
        }
        for r in 0..self.n {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.n {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.block[r * self.n + c])?;
            }
        }
        Ok(())
    }
}

fn flat<S: Clone>(rows: &[Vec<S>]) -> Vec<S> {
    rows.iter().flatten().cloned().collect()
}

/// Gauss-Jordan inversion of a row-major `n x n` matrix.
///
/// Exact scalars use full pivoting and fail only on a zero pivot. Floats use
/// partial pivoting and fail when a pivot drops below
/// `FLOAT_PIVOT_THRESHOLD * max|entry|`.
fn invert<S: Scalar>(n: usize, block: &[S]) -> Result<Vec<S>> {
    let mut a: Vec<S> = block.to_vec();
    let mut inv: Vec<S> = (0..n * n)
        .map(|k| if k / n == k % n { S::one() } else { S::zero() })
        .collect();
    let scale = block.iter().map(Scalar::abs_f64).fold(0.0, f64::max);
    let threshold = FLOAT_PIVOT_THRESHOLD * scale;
    // col_of[k]: original column now sitting at position k
    let mut col_of: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pr, pc) = if S::EXACT {
            let mut best: Option<(usize, usize, f64)> = None;
            for r in k..n {
                for c in k..n {
                    let v = &a[r * n + c];
                    if !v.is_zero() {
                        let mag = v.abs_f64();
                        if best.is_none_or(|(_, _, m)| mag > m) {
                            best = Some((r, c, mag));
                        }
                    }
                }
            }
            match best {
                Some((r, c, _)) => (r, c),
                None => return Err(Error::Singular),
            }
        } else {
            let r = (k..n)
                .max_by(|&x, &y| a[x * n + k].abs_f64().total_cmp(&a[y * n + k].abs_f64()))
                .expect("non-empty pivot range");
            let pivot = a[r * n + k].abs_f64();
            if pivot.is_nan() || pivot <= threshold || pivot == 0.0 {
                return Err(Error::NumericallySingular { pivot, threshold });
            }
            (r, k)
        };

        if pr != k {
            for c in 0..n {
                a.swap(k * n + c, pr * n + c);
                inv.swap(k * n + c, pr * n + c);
            }
        }
        if pc != k {
            for r in 0..n {
                a.swap(r * n + k, r * n + pc);
            }
            col_of.swap(k, pc);
        }

        let pivot = a[k * n + k].clone();
        let recip = S::one().checked_div(&pivot)?;
        for c in 0..n {
            a[k * n + c] = a[k * n + c].clone() * recip.clone();
            inv[k * n + c] = inv[k * n + c].clone() * recip.clone();
        }
        for r in 0..n {
            if r == k {
                continue;
            }
            let factor = a[r * n + k].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let da = factor.clone() * a[k * n + c].clone();
                a[r * n + c] = a[r * n + c].clone() - da;
                let di = factor.clone() * inv[k * n + c].clone();
                inv[r * n + c] = inv[r * n + c].clone() - di;
            }
        }
    }

    // M (A Q) = I, so A^{-1} = Q M: row k of M lands on row col_of[k].
    let mut out = vec![S::zero(); n * n];
    for k in 0..n {
        for c in 0..n {
            out[col_of[k] * n + c] = inv[k * n + c].clone();
        }
    }
    Ok(out)
}

/// `GL(R^1) -> GL(R^2) -> ... -> GL(R^max_n)` as a directed system.
pub fn gl_system<S: Scalar>(max_n: usize) -> DirectedSystem<GlInf<S>> {
    DirectedSystem::new("gl", 1..=max_n, |_, j, g: &GlInf<S>| {
        g.embed(j).expect("bonding map applied to a member of GL(R^i)")
    })
    .injective(true)
    .with_membership(|i, g: &GlInf<S>| g.size() <= i)
    .with_preimage(|_, i, g: &GlInf<S>| (g.size() <= i).then(|| g.clone()))
}
