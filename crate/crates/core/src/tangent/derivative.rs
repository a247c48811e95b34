//! Central finite differences, the numerical oracle for every closed-form
//! differential in the crate.

use crate::error::{Error, Result};
use crate::finseq::FinVec;

/// Default step for central differences.
pub const FD_STEP: f64 = 1e-6;

/// Relative error accepted between a closed-form derivative and its central
/// difference estimate at [`FD_STEP`].
pub const FD_REL_TOL: f64 = 1e-5;

/// `(f(x + h v) - f(x - h v)) / 2h`, the central-difference estimate of
/// `df(x) v`.
pub fn directional_derivative<F>(f: F, x: &FinVec<f64>, v: &FinVec<f64>, h: f64) -> Result<FinVec<f64>>
where
    F: Fn(&FinVec<f64>) -> Result<FinVec<f64>>,
{
    let eval = |p: &FinVec<f64>| {
        f(p).map_err(|e| match e {
            Error::EvaluationFailure(msg) => Error::EvaluationFailure(msg),
            other => Error::EvaluationFailure(other.to_string()),
        })
    };
    let step = v.scale(&h);
    let forward = eval(&x.add(&step))?;
    let backward = eval(&x.sub(&step))?;
    Ok(forward.sub(&backward).scale(&(0.5 / h)))
}

/// Columns `df(x) e_k`, `k = 1..=n`, by central differences.
pub fn fd_jacobian_columns<F>(f: F, x: &FinVec<f64>, n: usize, h: f64) -> Result<Vec<FinVec<f64>>>
where
    F: Fn(&FinVec<f64>) -> Result<FinVec<f64>>,
{
    (1..=n)
        .map(|k| directional_derivative(&f, x, &FinVec::basis(k), h))
        .collect()
}

/// `max|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(analytic: &FinVec<f64>, numeric: &FinVec<f64>) -> f64 {
    let scale = analytic.max_abs().max(numeric.max_abs());
    if scale == 0.0 {
        return 0.0;
    }
    analytic.max_abs_diff(numeric) / scale
}
