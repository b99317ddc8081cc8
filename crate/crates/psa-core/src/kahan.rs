//! Neumaier-compensated accumulation.
//!
//! Long prime sums run to 10^8 terms; naive accumulation loses about three
//! digits there, which would swamp the quantities these sums are compared
//! against. The compensation term is carried explicitly so callers can
//! report the residual.

use crate::real::Real;

#[derive(Copy, Clone, Debug)]
pub struct KahanSum<T> {
    sum: T,
    comp: T,
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Compensated total.
    pub fn value(&self) -> T {
        self.sum + self.comp
    }

    /// Accumulated rounding residual.
    pub fn compensation(&self) -> T {
        self.comp
    }
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> FromIterator<T> for KahanSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_naive_sum_loses() {
        // 1 then 1e-16 repeated: naive f64 accumulation drops every small term.
        let mut naive = 1.0f64;
        let mut kahan = KahanSum::new();
        kahan.add(1.0);
        for _ in 0..1_000_000 {
            naive += 1e-16;
            kahan.add(1e-16);
        }
        let exact = 1.0f64 + 1e-10;
        assert_eq!(naive, 1.0);
        assert!((kahan.value() - exact).abs() < 1e-22);
    }

    #[test]
    fn integer_terms_are_exact() {
        let mut acc = KahanSum::new();
        for k in 1..=10_000u64 {
            acc.add(k as f64);
        }
        assert_eq!(acc.value(), 50_005_000.0);
        assert_eq!(acc.compensation(), 0.0);
    }
}
