use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probvec::ProbVec;

/// Which solver produced a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Shearer,
    Tree,
    Cycle,
    Discrete,
}

/// A point `lambda * direction` on a boundary surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    pub direction: ProbVec,
    pub lambda: f64,
    pub boundary_vector: ProbVec,
    pub method: Method,
    /// Magnitude of the defining equation at the returned root. For the
    /// discrete solver this is the width of the final bisection bracket.
    pub residual: f64,
    /// Cycle rotation achieving the minimum, for the cycle solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<usize>,
}

impl BoundaryResult {
    pub fn new(direction: &ProbVec, lambda: f64, method: Method, residual: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid(format!("boundary scalar must be positive, got {lambda}")));
        }
        Ok(BoundaryResult {
            direction: direction.clone(),
            lambda,
            boundary_vector: direction.scaled(lambda)?,
            method,
            residual,
            rotation: None,
        })
    }
}

/// Bisection on a monotone predicate that holds at `lo` and fails at `hi`.
///
/// Stops once the bracket is narrower than `tol` and `residual(lo)` is at
/// most `residual_tol`, or when the bracket can no longer be split in
/// floating point. Returns the final `(lo, hi)`.
pub(crate) fn bisect_last_true(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    residual_tol: f64,
    max_iter: usize,
    mut pred: impl FnMut(f64) -> bool,
    mut residual: impl FnMut(f64) -> f64,
) -> Result<(f64, f64)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    for _ in 0..max_iter {
        if hi - lo <= tol && residual(lo) <= residual_tol {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            if hi - lo <= tol {
                return Ok((lo, hi));
            }
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        detail: format!("bracket [{lo}, {hi}], residual {}", residual(lo)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisects_sqrt2() {
        let (lo, hi) = bisect_last_true(0.0, 2.0, 1e-12, 1e-11, 200, |x| x * x < 2.0, |x| (x * x - 2.0).abs()).unwrap();
        assert!(hi - lo <= 1e-12);
        assert!((lo - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let err = bisect_last_true(0.0, 1.0, 1e-12, 1e-12, 5, |x| x < 0.3, |_| 0.0).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn result_scales_direction() {
        let d = ProbVec::new(vec![1.0, 2.0]).unwrap();
        let r = BoundaryResult::new(&d, 0.25, Method::Shearer, 0.0).unwrap();
        assert_eq!(r.boundary_vector.as_slice(), &[0.25, 0.5]);
        assert!(BoundaryResult::new(&d, -1.0, Method::Shearer, 0.0).is_err());
    }
}
