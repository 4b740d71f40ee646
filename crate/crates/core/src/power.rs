//! Real powers with explicit domain rules.

use crate::error::{NumericError, Result};

/// `Some(n)` when `v` is an integer small enough for `powi`.
pub(crate) fn as_int(v: f64) -> Option<i32> {
    if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 {
        Some(v as i32)
    } else {
        None
    }
}

pub(crate) fn is_odd_integer(v: f64) -> bool {
    as_int(v).is_some_and(|n| n % 2 != 0)
}

/// `x^e` over the reals.
///
/// Integer exponents use repeated multiplication and accept negative bases;
/// other exponents require `x > 0`. Negative powers of zero are domain errors.
pub fn real_pow(x: f64, e: f64) -> Result<f64> {
    if let Some(n) = as_int(e) {
        if x == 0.0 && n < 0 {
            return Err(NumericError::Domain(format!("0^{e} is singular")));
        }
        return Ok(x.powi(n));
    }
    if x > 0.0 {
        Ok(x.powf(e))
    } else if x == 0.0 && e > 0.0 {
        Ok(0.0)
    } else {
        Err(NumericError::Domain(format!("{x}^{e} has no real value")))
    }
}
