//! Scalar abstraction for the analysis core.
//!
//! Everything downstream of the sieve (function evaluation, quadrature,
//! summation, estimates) is generic over [`Real`]; the crate root exports
//! `f64` aliases for the common case.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into `T`.
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant converts to Real")
}

/// Convert an integer grid point into `T` (rounded when `T` is narrower).
pub(crate) fn cast_u64<T: Real>(n: u64) -> T {
    T::from_u64(n).expect("u64 converts to Real")
}

/// `x` as `f64` for error reporting.
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
