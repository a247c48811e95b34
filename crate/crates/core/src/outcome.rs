//! Pass/fail results of a single sampled identity.

use crate::finseq::FinVec;
use crate::glinf::GlInf;
use crate::scalar::Scalar;

/// Result of comparing the two sides of one identity on one sample.
///
/// `pass` is decided by exact equality for exact scalars and by the
/// tolerance for floats. `residual` is the max absolute coordinate
/// difference in both modes; callers decide whether to report it.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub residual: Option<f64>,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn ok() -> Self {
        Outcome {
            pass: true,
            residual: None,
            detail: None,
        }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome {
            pass: false,
            residual: None,
            detail: Some(detail.into()),
        }
    }

    /// A float-mode outcome from a measured residual.
    pub fn from_residual(residual: f64, tol: f64, label: &str) -> Self {
        let pass = residual <= tol;
        Outcome {
            pass,
            residual: Some(residual),
            detail: (!pass).then(|| format!("{label}: residual {residual:e} > tol {tol:e}")),
        }
    }

    pub fn compare_vec<S: Scalar>(label: &str, lhs: &FinVec<S>, rhs: &FinVec<S>, tol: f64) -> Self {
        let residual = lhs.max_abs_diff(rhs);
        Self::compare(label, lhs.approx_eq(rhs, tol), residual, || format!("{lhs} vs {rhs}"))
    }

    pub fn compare_gl<S: Scalar>(label: &str, lhs: &GlInf<S>, rhs: &GlInf<S>, tol: f64) -> Self {
        let residual = lhs.max_abs_diff(rhs);
        Self::compare(label, lhs.approx_eq(rhs, tol), residual, || format!("[{lhs}] vs [{rhs}]"))
    }

    pub fn compare_scalar<S: Scalar>(label: &str, lhs: &S, rhs: &S, tol: f64) -> Self {
        let residual = (lhs.clone() - rhs.clone()).abs_f64();
        Self::compare(label, lhs.approx_eq(rhs, tol), residual, || format!("{lhs} vs {rhs}"))
    }

    fn compare(label: &str, pass: bool, residual: f64, show: impl FnOnce() -> String) -> Self {
        Outcome {
            pass,
            residual: Some(residual),
            detail: (!pass).then(|| format!("{label}: {}", show())),
        }
    }

    /// Both must pass; keeps the larger residual and the first failure.
    pub fn and(self, other: Outcome) -> Outcome {
        let residual = match (self.residual, other.residual) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Outcome {
            pass: self.pass && other.pass,
            residual,
            detail: self.detail.or(other.detail),
        }
    }

    pub fn with_context(mut self, context: impl FnOnce() -> String) -> Self {
        if let Some(d) = self.detail.take() {
            self.detail = Some(format!("{} ({d})", context()));
        }
        self
    }
}

impl From<crate::error::Error> for Outcome {
    fn from(e: crate::error::Error) -> Self {
        Outcome::fail(format!("evaluation error: {e}"))
    }
}
