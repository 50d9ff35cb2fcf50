//! Bracketing root finder.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` for a function with a single sign change.
///
/// Stops when the bracket is narrower than `x_tol`, when `f` hits zero
/// exactly, or when the midpoint can no longer be distinguished from an
/// endpoint in floating point. Returns the final midpoint.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed { lo, hi });
    }
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
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
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn decreasing_function() {
        let r = bisect(|x| 0.25 - x, 0.0, 1.0, 1e-14).unwrap();
        assert!((r - 0.25).abs() < 1e-14);
    }

    #[test]
    fn rejects_missing_bracket() {
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(Error::NotBracketed { .. })));
        assert!(bisect(|_| f64::NAN, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn exact_endpoint_root() {
        assert_eq!(bisect(|x| x, 0.0, 1.0, 1e-12).unwrap(), 0.0);
    }
}
