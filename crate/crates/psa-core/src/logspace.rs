//! Signed log-space scalars.
//!
//! Sums over functions such as 2^t overflow `f64` long before the ranges of
//! interest, so those paths carry values as `sign * exp(ln_abs)` and combine
//! them with log-sum-exp / log-diff-exp.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::real::Real;

/// A real number represented as `sign * exp(ln_abs)`.
///
/// `sign == 0` encodes exact zero (with `ln_abs = -inf`).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SignedLog<T> {
    sign: i8,
    ln_abs: T,
}

impl<T: Real> SignedLog<T> {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            ln_abs: T::neg_infinity(),
        }
    }

    /// Build from a sign and the natural log of the magnitude.
    pub fn new(sign: i8, ln_abs: T) -> Self {
        if sign == 0 || ln_abs == T::neg_infinity() {
            Self::zero()
        } else {
            Self {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_value(v: T) -> Self {
        if v == T::zero() {
            Self::zero()
        } else {
            Self {
                sign: if v > T::zero() { 1 } else { -1 },
                ln_abs: v.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> T {
        self.ln_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Back to linear space; overflows to +/-inf when the magnitude exceeds `T`.
    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            1 => self.ln_abs.exp(),
            _ => -self.ln_abs.exp(),
        }
    }
}

impl<T: Real> Neg for SignedLog<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.sign, self.ln_abs)
    }
}

impl<T: Real> Add for SignedLog<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (hi, lo) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = (lo.ln_abs - hi.ln_abs).exp(); // in [0, 1]
        if hi.sign == lo.sign {
            Self::new(hi.sign, hi.ln_abs + d.ln_1p())
        } else if d == T::one() {
            Self::zero()
        } else {
            Self::new(hi.sign, hi.ln_abs + (-d).ln_1p())
        }
    }
}

impl<T: Real> Sub for SignedLog<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Mul for SignedLog<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::zero();
        }
        Self::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl<T: Real> Div for SignedLog<T> {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return Self::zero();
        }
        Self::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

/// Streaming signed log-sum accumulator.
#[derive(Copy, Clone, Debug)]
pub struct LogSumAcc<T> {
    total: SignedLog<T>,
}

impl<T: Real> LogSumAcc<T> {
    pub fn new() -> Self {
        Self {
            total: SignedLog::zero(),
        }
    }

    pub fn add(&mut self, term: SignedLog<T>) {
        self.total = self.total + term;
    }

    pub fn total(&self) -> SignedLog<T> {
        self.total
    }
}

impl<T: Real> Default for LogSumAcc<T> {
    fn default() -> Self {
        Self::new()
    }
}
