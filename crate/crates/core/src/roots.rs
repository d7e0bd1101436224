//! Bracketing root search.

use crate::error::{Error, Result};

/// Iteration cap of [`bisect`].
pub const MAX_ITER: usize = 200;

/// Root of a continuous `f` on `[lo, hi]` by bisection, stopping once the
/// bracket is narrower than `tol`.
///
/// The endpoint values must have opposite signs (or one must vanish).
pub fn bisect(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return Err(Error::Convergence(format!(
            "[{lo}, {hi}] does not bracket a root (f = {f_lo}, {f_hi})"
        )));
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence(format!(
        "bracket [{lo}, {hi}] still wider than {tol} after {MAX_ITER} halvings"
    )))
}
