//! Numeric checks of the sufficient and necessary conditions for
//! `sum a_k f(k) / sum b_k f(k) -> 1`, where `a_k` is the prime indicator
//! and `b_k = 1/log k` (`b_1 = 0`).
//!
//! Limits cannot be decided from finite data, so every verdict is an
//! operationalized trend test over a grid, with the thresholds exposed in
//! [`ConditionThresholds`] and the full evidence trail returned alongside
//! the verdict. A verdict of `holds`/`fails` needs at least four usable
//! grid points; anything thinner is `inconclusive`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FunctionSpec, Growth, Monotonicity, PROBE_GRID};
use crate::kahan::KahanSum;
use crate::logspace::{LogSumAcc, SignedLog};
use crate::quad;
use crate::real::{cast, cast_u64, Real};

/// Largest grid point the checker accepts.
pub const MAX_GRID_N: u64 = 1_000_000_000;

/// Verdict for one condition.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    /// f' is identically zero: the hypothesis `f' != 0` is violated but the
    /// conclusion holds trivially because the weighted sums reduce to the
    /// unweighted counting functions.
    DegenerateConvergent,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
            Verdict::DegenerateConvergent => "degenerate-convergent",
        })
    }
}

/// One grid observation.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct EvidencePoint<T> {
    pub n: u64,
    pub statistic: T,
}

/// A named condition with its verdict and evidence trail.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionFinding<T> {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: Vec<EvidencePoint<T>>,
}

/// Per-function report over a grid of `n`.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport<T> {
    pub function: String,
    pub grid: Vec<u64>,
    pub conditions: Vec<ConditionFinding<T>>,
}

impl<T> ConditionReport<T> {
    pub fn has_fails(&self) -> bool {
        self.conditions.iter().any(|c| c.verdict == Verdict::Fails)
    }
}

/// Trend-test thresholds. Defaults: distance 0.05 from 1, 10% growth per
/// decade for divergence, 25% decay per decade and level 0.5 for the
/// necessary condition.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct ConditionThresholds<T> {
    /// Condition 1: minimum distance of the statistic from 1.
    pub distance_from_one: T,
    /// Condition 3: required growth of |integral| per grid decade.
    pub growth_per_decade: T,
    /// Necessary condition: required decay of r(p) per grid decade.
    pub decay_per_decade: T,
    /// Necessary condition: level above which a non-decreasing r(p) fails.
    pub fail_level: T,
}

impl<T: Real> Default for ConditionThresholds<T> {
    fn default() -> Self {
        Self {
            distance_from_one: cast(0.05),
            growth_per_decade: cast(0.10),
            decay_per_decade: cast(0.25),
            fail_level: cast(0.5),
        }
    }
}

/// Partial sum `B(n) = sum_{k=2}^n 1/log k`.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct BSum<T> {
    pub n: u64,
    pub value: T,
}

/// Compensated evaluation of `B(n)`.
pub fn b_sum<T: Real>(n: u64) -> Result<BSum<T>> {
    if n < 2 {
        return Err(Error::InvalidRange { lo: 2, hi: n });
    }
    let mut acc = KahanSum::new();
    for k in 2..=n {
        acc.add(cast_u64::<T>(k).ln().recip());
    }
    Ok(BSum {
        n,
        value: acc.value(),
    })
}

fn validate_grid(grid: &[u64]) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::InvalidGrid(format!(
            "need at least 4 grid points, got {}",
            grid.len()
        )));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    if grid[0] < 3 {
        return Err(Error::InvalidGrid("grid points must be >= 3".into()));
    }
    if *grid.last().unwrap() > MAX_GRID_N {
        return Err(Error::InvalidGrid(format!("grid points must be <= {MAX_GRID_N}")));
    }
    Ok(())
}

fn decades(from: u64, to: u64) -> f64 {
    (to as f64 / from as f64).log10()
}

fn is_degenerate<T: Real>(spec: &FunctionSpec<T>) -> bool {
    if spec.monotone() == Monotonicity::Constant {
        return true;
    }
    let tiny = cast::<T>(1e-300);
    PROBE_GRID
        .iter()
        .all(|&t| spec.deriv(cast(t)).abs() < tiny)
}

/// Sufficient-condition check in the integral form:
///
/// 1. `int_2^n t f'(t)/log t dt / (n f(n)/log n)` stays bounded away from 1;
/// 2. f is monotone with f' != 0 (constant f is reported as degenerate);
/// 3. `|int_2^n t f'(t)/log t dt|` grows without bound.
pub fn check_sufficient<T: Real>(spec: &FunctionSpec<T>, grid: &[u64]) -> Result<ConditionReport<T>> {
    check_sufficient_with(spec, grid, &ConditionThresholds::default())
}

pub fn check_sufficient_with<T: Real>(
    spec: &FunctionSpec<T>,
    grid: &[u64],
    thresholds: &ConditionThresholds<T>,
) -> Result<ConditionReport<T>> {
    validate_grid(grid)?;

    if is_degenerate(spec) {
        // f' == 0: evidence is the derivative probe trail.
        let evidence: Vec<EvidencePoint<T>> = PROBE_GRID
            .iter()
            .map(|&t| EvidencePoint {
                n: t as u64,
                statistic: spec.deriv(cast(t)),
            })
            .collect();
        let conditions = [
            "ratio-bounded-away-from-one",
            "monotone-nonvanishing-derivative",
            "integral-diverges",
        ]
        .into_iter()
        .map(|name| ConditionFinding {
            name: name.to_string(),
            verdict: Verdict::DegenerateConvergent,
            evidence: evidence.clone(),
        })
        .collect();
        return Ok(ConditionReport {
            function: spec.id().to_string(),
            grid: grid.to_vec(),
            conditions,
        });
    }

    // Grid points where the integral and the boundary term stay finite.
    let mut ratios: Vec<EvidencePoint<T>> = Vec::new();
    let mut integrals: Vec<EvidencePoint<T>> = Vec::new();
    for &n in grid {
        let nf = cast_u64::<T>(n);
        let f_n = spec.eval(nf);
        if !f_n.is_finite() {
            continue;
        }
        let denom = nf * f_n / nf.ln();
        let integral = match quad::integrate(
            |t: T| t * spec.deriv(t) / t.ln(),
            cast(2.0),
            nf,
            cast(quad::DEFAULT_BOUND_REL_TOL),
        ) {
            Ok(r) => r.value,
            Err(Error::NonFiniteIntegrand { .. }) => continue,
            Err(e) => return Err(e),
        };
        integrals.push(EvidencePoint {
            n,
            statistic: integral.abs(),
        });
        if denom != T::zero() {
            ratios.push(EvidencePoint {
                n,
                statistic: integral / denom,
            });
        }
    }

    let cond1 = ConditionFinding {
        name: "ratio-bounded-away-from-one".to_string(),
        verdict: verdict_ratio_away_from_one(&ratios, thresholds),
        evidence: ratios,
    };

    let cond2_verdict = match spec.monotone() {
        Monotonicity::Increasing | Monotonicity::Decreasing => Verdict::Holds,
        Monotonicity::Constant => Verdict::DegenerateConvergent,
        Monotonicity::None => Verdict::Inconclusive,
    };
    let cond2 = ConditionFinding {
        name: "monotone-nonvanishing-derivative".to_string(),
        verdict: cond2_verdict,
        evidence: PROBE_GRID
            .iter()
            .map(|&t| EvidencePoint {
                n: t as u64,
                statistic: spec.deriv(cast(t)),
            })
            .collect(),
    };

    let cond3 = ConditionFinding {
        name: "integral-diverges".to_string(),
        verdict: verdict_integral_diverges(&integrals, thresholds),
        evidence: integrals,
    };

    Ok(ConditionReport {
        function: spec.id().to_string(),
        grid: grid.to_vec(),
        conditions: vec![cond1, cond2, cond3],
    })
}

fn verdict_ratio_away_from_one<T: Real>(
    evidence: &[EvidencePoint<T>],
    thresholds: &ConditionThresholds<T>,
) -> Verdict {
    if evidence.len() < 4 {
        return Verdict::Inconclusive;
    }
    let top = &evidence[evidence.len() / 2..];
    let distances: Vec<T> = top
        .iter()
        .map(|e| (e.statistic - T::one()).abs())
        .collect();
    // small slack so flat trends are not misread as shrinking
    let slack = cast::<T>(0.99);
    let non_shrinking = distances.windows(2).all(|w| w[1] >= w[0] * slack);
    let shrinking = distances.windows(2).all(|w| w[1] <= w[0]);
    let all_far = distances.iter().all(|d| *d >= thresholds.distance_from_one);
    let all_near = distances.iter().all(|d| *d < thresholds.distance_from_one);
    if all_far && non_shrinking {
        Verdict::Holds
    } else if all_near && shrinking {
        // converging to 1: the hypothesis is genuinely violated
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

fn verdict_integral_diverges<T: Real>(
    evidence: &[EvidencePoint<T>],
    thresholds: &ConditionThresholds<T>,
) -> Verdict {
    if evidence.len() < 4 {
        return Verdict::Inconclusive;
    }
    let growth_ok = evidence.windows(2).all(|w| {
        let d = decades(w[0].n, w[1].n);
        let required = (T::one() + thresholds.growth_per_decade).powf(cast(d));
        w[1].statistic >= w[0].statistic * required
    });
    if growth_ok {
        return Verdict::Holds;
    }
    let top = &evidence[evidence.len() / 2..];
    let flat_or_shrinking = top.windows(2).all(|w| w[1].statistic <= w[0].statistic);
    if flat_or_shrinking {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

/// Specialized check for monotonically increasing unbounded f:
/// f' > 0, f -> infinity, and `f(n)/(n f'(n))` bounded away from 0.
#[derive(Clone, Debug, Serialize)]
pub struct MonotoneIncreasingReport<T> {
    pub function: String,
    pub verdict: Verdict,
    pub evidence: Vec<EvidencePoint<T>>,
}

pub fn check_monotone_increasing<T: Real>(spec: &FunctionSpec<T>) -> MonotoneIncreasingReport<T> {
    check_monotone_increasing_with(spec, &ConditionThresholds::default())
}

pub fn check_monotone_increasing_with<T: Real>(
    spec: &FunctionSpec<T>,
    thresholds: &ConditionThresholds<T>,
) -> MonotoneIncreasingReport<T> {
    // geometric probe grid 10^2 .. 10^8
    let probes: Vec<u64> = (2..=8).map(|e| 10u64.pow(e)).collect();
    let mut evidence = Vec::new();
    let mut derivative_positive = true;
    let mut values = Vec::new();
    for &n in &probes {
        let nf = cast_u64::<T>(n);
        let f_n = spec.eval(nf);
        let d_n = spec.deriv(nf);
        if !f_n.is_finite() || !d_n.is_finite() {
            continue;
        }
        if d_n <= T::zero() {
            derivative_positive = false;
        }
        values.push(f_n);
        evidence.push(EvidencePoint {
            n,
            statistic: f_n / (nf * d_n),
        });
    }

    let verdict = if !derivative_positive || values.len() < 2 {
        Verdict::Fails
    } else {
        let grows_unbounded = *values.last().unwrap() >= values[0] * cast(2.0);
        let top = &evidence[evidence.len() / 2..];
        let stats: Vec<T> = top.iter().map(|e| e.statistic.abs()).collect();
        let away_from_zero = stats.iter().all(|s| *s >= thresholds.distance_from_one);
        let decaying = evidence.len() >= 2
            && evidence.windows(2).all(|w| {
                let d = decades(w[0].n, w[1].n);
                let factor = (T::one() - thresholds.decay_per_decade).powf(cast(d));
                w[1].statistic.abs() <= w[0].statistic.abs() * factor
            });
        if !grows_unbounded {
            Verdict::Fails
        } else if away_from_zero {
            Verdict::Holds
        } else if decaying {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    };

    MonotoneIncreasingReport {
        function: spec.id().to_string(),
        verdict,
        evidence,
    }
}

/// Necessary-condition check: `r(p) = |f(p) / sum_{k<=p} b_k f(k)|` must
/// vanish along primes. Exponential f is evaluated in signed log space.
pub fn check_necessary<T: Real>(
    spec: &FunctionSpec<T>,
    prime_grid: &[u64],
) -> Result<ConditionReport<T>> {
    check_necessary_with(spec, prime_grid, &ConditionThresholds::default())
}

pub fn check_necessary_with<T: Real>(
    spec: &FunctionSpec<T>,
    prime_grid: &[u64],
    thresholds: &ConditionThresholds<T>,
) -> Result<ConditionReport<T>> {
    if prime_grid.is_empty() || !prime_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidGrid(
            "prime grid must be non-empty and strictly increasing".into(),
        ));
    }
    if let Some(&bad) = prime_grid.iter().find(|&&p| !crate::primes::is_prime(p)) {
        return Err(Error::InvalidGrid(format!("{bad} is not prime")));
    }
    if *prime_grid.last().unwrap() > MAX_GRID_N {
        return Err(Error::InvalidGrid(format!("grid points must be <= {MAX_GRID_N}")));
    }

    let log_space = spec.growth() == Growth::Exponential;
    if log_space && !spec.has_log_eval() {
        return Err(Error::MissingLogEval {
            id: spec.id().to_string(),
        });
    }

    let mut evidence = Vec::with_capacity(prime_grid.len());
    if log_space {
        let mut acc = LogSumAcc::new();
        let mut k = 2u64;
        for &p in prime_grid {
            while k <= p {
                let b_k = SignedLog::from_value(cast_u64::<T>(k).ln().recip());
                acc.add(spec.log_eval(cast_u64(k)).expect("checked") * b_k);
                k += 1;
            }
            let r = spec.log_eval(cast_u64(p)).expect("checked") / acc.total();
            evidence.push(EvidencePoint {
                n: p,
                statistic: r.value().abs(),
            });
        }
    } else {
        let mut acc = KahanSum::new();
        let mut k = 2u64;
        for &p in prime_grid {
            while k <= p {
                let kf = cast_u64::<T>(k);
                acc.add(spec.eval(kf) / kf.ln());
                k += 1;
            }
            let denom = acc.value();
            let r = if denom == T::zero() {
                T::infinity()
            } else {
                (spec.eval(cast_u64(p)) / denom).abs()
            };
            evidence.push(EvidencePoint { n: p, statistic: r });
        }
    }

    let verdict = verdict_tail_vanishes(&evidence, thresholds);
    Ok(ConditionReport {
        function: spec.id().to_string(),
        grid: prime_grid.to_vec(),
        conditions: vec![ConditionFinding {
            name: "tail-term-vanishes".to_string(),
            verdict,
            evidence,
        }],
    })
}

fn verdict_tail_vanishes<T: Real>(
    evidence: &[EvidencePoint<T>],
    thresholds: &ConditionThresholds<T>,
) -> Verdict {
    if evidence.len() < 4 {
        return Verdict::Inconclusive;
    }
    let decays = evidence.windows(2).all(|w| {
        let d = decades(w[0].n, w[1].n);
        let factor = (T::one() - thresholds.decay_per_decade).powf(cast(d));
        w[1].statistic <= w[0].statistic * factor
    });
    if decays {
        return Verdict::Holds;
    }
    let top = &evidence[evidence.len() / 2..];
    let slack = cast::<T>(0.99);
    let non_decreasing = top.windows(2).all(|w| w[1].statistic >= w[0].statistic * slack);
    let above_level = top.iter().all(|e| e.statistic > thresholds.fail_level);
    if non_decreasing && above_level {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}
