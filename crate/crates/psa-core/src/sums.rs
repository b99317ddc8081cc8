//! Exact sums of `f` over primes.
//!
//! `exact_sum` streams primes through a compensated accumulator;
//! `abel_sum` evaluates the boundary-minus-step-sum identity
//! `A(n) f(n) - sum_{k=2}^{n-1} A(k) (f(k+1) - f(k))` exactly (the counting
//! function is piecewise constant, so no quadrature is involved), which
//! makes agreement of the two an identity check rather than an estimate.
//! Exponentially growing `f` is accumulated in signed log space.

use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, Growth};
use crate::kahan::KahanSum;
use crate::logspace::{LogSumAcc, SignedLog};
use crate::primes::PrimeEngine;
use crate::real::{cast_u64, Real};

/// Value of a prime sum: linear, or signed log-space for exponential `f`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SumValue<T> {
    Linear(T),
    LogSpace(SignedLog<T>),
}

impl<T: Real> SumValue<T> {
    /// Value in linear space; log-space magnitudes beyond `T` overflow to
    /// +/-inf.
    pub fn linear(&self) -> T {
        match self {
            SumValue::Linear(v) => *v,
            SumValue::LogSpace(l) => l.value(),
        }
    }

    /// Value in signed log space.
    pub fn signed_log(&self) -> SignedLog<T> {
        match self {
            SumValue::Linear(v) => SignedLog::from_value(*v),
            SumValue::LogSpace(l) => *l,
        }
    }
}

/// The sum `sum_{p <= n} f(p)` with its accounting.
#[derive(Copy, Clone, Debug)]
pub struct ExactSum<T> {
    pub n: u64,
    pub value: SumValue<T>,
    /// Number of terms, i.e. pi(n).
    pub terms: u64,
    /// Accumulated rounding residual of the compensated accumulator
    /// (zero on the log-space path).
    pub compensation: T,
}

fn require_log_eval<T: Real>(spec: &FunctionSpec<T>) -> Result<()> {
    if spec.growth() == Growth::Exponential && !spec.has_log_eval() {
        return Err(Error::MissingLogEval {
            id: spec.id().to_string(),
        });
    }
    Ok(())
}

fn check_finite_term<T: Real>(v: T, at: u64) -> Result<T> {
    if !v.is_finite() {
        return Err(Error::Overflow { t: at as f64 });
    }
    Ok(v)
}

/// Compute `sum_{p <= n} f(p)` by streaming primes.
pub fn exact_sum<T: Real>(engine: &PrimeEngine, spec: &FunctionSpec<T>, n: u64) -> Result<ExactSum<T>> {
    require_log_eval(spec)?;
    if spec.growth() == Growth::Exponential {
        let mut acc = LogSumAcc::new();
        let mut terms = 0u64;
        for p in engine.primes_upto(n)? {
            let term = spec.log_eval(cast_u64(p)).expect("log_eval checked above");
            acc.add(term);
            terms += 1;
        }
        return Ok(ExactSum {
            n,
            value: SumValue::LogSpace(acc.total()),
            terms,
            compensation: T::zero(),
        });
    }
    let mut acc = KahanSum::new();
    let mut terms = 0u64;
    for p in engine.primes_upto(n)? {
        acc.add(check_finite_term(spec.eval(cast_u64(p)), p)?);
        terms += 1;
    }
    Ok(ExactSum {
        n,
        value: SumValue::Linear(acc.value()),
        terms,
        compensation: acc.compensation(),
    })
}

/// Compute the same sum through the boundary-minus-step-sum identity.
pub fn abel_sum<T: Real>(engine: &PrimeEngine, spec: &FunctionSpec<T>, n: u64) -> Result<ExactSum<T>> {
    require_log_eval(spec)?;
    if spec.growth() == Growth::Exponential {
        return abel_sum_logspace(engine, spec, n);
    }

    let mut primes = engine.primes_upto(n)?;
    let mut next_p = primes.next();
    let mut count = 0u64; // running pi(k)
    let mut acc = KahanSum::new(); // sum_k A(k) (f(k+1) - f(k))
    let mut f_k = spec.eval(cast_u64(2));
    for k in 2..n {
        if next_p == Some(k) {
            count += 1;
            next_p = primes.next();
        }
        let f_k1 = check_finite_term(spec.eval(cast_u64(k + 1)), k + 1)?;
        if count > 0 {
            acc.add(cast_u64::<T>(count) * (f_k1 - f_k));
        }
        f_k = f_k1;
    }
    if next_p == Some(n) {
        count += 1;
    }
    let boundary = cast_u64::<T>(count) * spec.eval(cast_u64(n));
    Ok(ExactSum {
        n,
        value: SumValue::Linear(boundary - acc.value()),
        terms: count,
        compensation: acc.compensation(),
    })
}

fn abel_sum_logspace<T: Real>(
    engine: &PrimeEngine,
    spec: &FunctionSpec<T>,
    n: u64,
) -> Result<ExactSum<T>> {
    let mut primes = engine.primes_upto(n)?;
    let mut next_p = primes.next();
    let mut count = 0u64;
    let mut acc = LogSumAcc::new();
    let mut lf_k = spec.log_eval(cast_u64(2)).expect("log_eval checked");
    for k in 2..n {
        if next_p == Some(k) {
            count += 1;
            next_p = primes.next();
        }
        let lf_k1 = spec.log_eval(cast_u64(k + 1)).expect("log_eval checked");
        if count > 0 {
            let delta = lf_k1 - lf_k;
            acc.add(delta * SignedLog::from_value(cast_u64::<T>(count)));
        }
        lf_k = lf_k1;
    }
    if next_p == Some(n) {
        count += 1;
    }
    let boundary = spec.log_eval(cast_u64(n)).expect("log_eval checked")
        * SignedLog::from_value(cast_u64::<T>(count));
    Ok(ExactSum {
        n,
        value: SumValue::LogSpace(boundary - acc.total()),
        terms: count,
        compensation: T::zero(),
    })
}

/// `log prod_{p <= n} p = sum_{p <= n} log p` (the Chebyshev theta function).
pub fn log_product_primes<T: Real>(engine: &PrimeEngine, n: u64) -> Result<T> {
    let mut acc = KahanSum::new();
    for p in engine.primes_upto(n)? {
        acc.add(cast_u64::<T>(p).ln());
    }
    Ok(acc.value())
}

/// Relative gap between two exact sums, in linear or log space as
/// appropriate. Used by the identity-verification suites.
pub fn relative_gap<T: Real>(a: &ExactSum<T>, b: &ExactSum<T>) -> T {
    match (&a.value, &b.value) {
        (SumValue::LogSpace(_), _) | (_, SumValue::LogSpace(_)) => {
            let (la, lb) = (a.value.signed_log(), b.value.signed_log());
            if la.is_zero() && lb.is_zero() {
                return T::zero();
            }
            // |a - b| / |b| = |a/b - 1|
            ((la / lb).value() - T::one()).abs()
        }
        (SumValue::Linear(va), SumValue::Linear(vb)) => {
            let scale = vb.abs().max(T::from_f64(1e-300).unwrap());
            (*va - *vb).abs() / scale
        }
    }
}
