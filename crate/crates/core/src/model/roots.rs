//! Bracketed bisection for monotone scalar problems.

use crate::{Error, Result};

pub const REL_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 200;

/// Root of `f` on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo * fhi > 0.0 {
        return Err(Error::Numeric(format!(
            "root not bracketed on [{lo}, {hi}]: f = ({flo}, {fhi})"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= REL_TOL * mid.abs().max(f64::MIN_POSITIVE) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric(format!(
        "bisection did not converge in {MAX_ITER} iterations"
    )))
}

/// Largest `x` in `(0, cap]` with `ok(x)`, assuming `ok` holds near 0 and
/// fails beyond some point. Returns a point on the satisfying side.
pub fn largest_satisfying<F: Fn(f64) -> bool>(ok: F, cap: f64) -> f64 {
    if ok(cap) {
        return cap;
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= REL_TOL * mid {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn unbracketed_is_error() {
        assert!(bisect_root(|x| x * x + 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn largest_satisfying_threshold() {
        let x = largest_satisfying(|x| x <= 0.3, 1.0);
        assert!(x <= 0.3 && 0.3 - x < 1e-9);
        assert_eq!(largest_satisfying(|_| true, 0.7), 0.7);
    }
}
