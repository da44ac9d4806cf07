//! Exact rational arithmetic helpers.
//!
//! Capacities, matching values and duals are all `BigRational`: the
//! invariants we assert (multiples of epsilon, exact round trips, zero
//! duality gaps) are equalities that floating point cannot certify.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// True iff `x` is an integral multiple of `step` (`step > 0`).
pub fn is_multiple_of(x: &Rat, step: &Rat) -> bool {
    debug_assert!(step.is_positive());
    (x / step).is_integer()
}

/// Smallest integer >= x.
pub fn rat_ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// x rounded up to the next multiple of `step`.
pub fn round_up_to_multiple(x: &Rat, step: &Rat) -> Rat {
    let q = (x / step).ceil();
    q * step
}

/// Lossy conversion for reports and Monte-Carlo tolerances.
pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Render as `p/q` (or `p` when integral), the format used in reports.
pub fn rat_display(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Validates that epsilon is the reciprocal of an integer k >= 2 and
/// returns k. Granularity arguments all assume this form.
pub fn eps_denominator(eps: &Rat) -> Option<u64> {
    if !eps.is_positive() || !eps.numer().is_one() {
        return None;
    }
    let k = eps.denom().to_u64()?;
    if k >= 2 {
        Some(k)
    } else {
        None
    }
}
