//! Adaptive quadrature for the main-term and remainder-bound integrals.
//!
//! The method is adaptive Simpson with a Richardson error estimate: an
//! interval is accepted once the two-panel refinement agrees with the
//! one-panel estimate to the local tolerance, and the extrapolated value
//! `S2 + (S2 - S1)/15` is accumulated. Integrands here are smooth on
//! `[2, n]` (log 2 > 0, so there is no endpoint singularity), which keeps
//! subdivision counts small. Long ranges with decaying integrands are
//! integrated under the substitution `u = log t` to keep the interval count
//! bounded when `b/a` spans many decades.

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::kahan::KahanSum;
use crate::real::{as_f64, cast, cast_u64, Real};

/// Default relative tolerance for main-term integrals.
pub const DEFAULT_MAIN_REL_TOL: f64 = 1e-9;
/// Default relative tolerance for remainder-bound integrals (order-of-magnitude objects).
pub const DEFAULT_BOUND_REL_TOL: f64 = 1e-6;
/// Subdivision cap; exceeding it signals a pathological integrand.
pub const MAX_INTERVALS: usize = 1_000_000;

const ABS_FLOOR: f64 = 1e-14;

/// Result of one adaptive integration.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    /// Number of accepted leaf intervals (>= 1).
    pub subdivisions: usize,
}

/// Remainder-bound integrand weights.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum RemainderWeight<T> {
    /// t |f'(t)| / log^2 t
    Crude,
    /// t |f'(t)| exp(-c (log t)^theta)
    Pnt { c: T, theta: T },
    /// |f'(t)| sqrt(t) log t
    Rh,
}

fn check_rel_tol<T: Real>(rel_tol: T) -> Result<()> {
    if rel_tol < cast(1e-12) || rel_tol > cast(1e-2) || !rel_tol.is_finite() {
        return Err(Error::InvalidTolerance(as_f64(rel_tol)));
    }
    Ok(())
}

/// Integrate `g` over `[a, b]` to a relative tolerance.
///
/// Requires `2 <= a <= b` and `g` finite on the interval. When `b/a`
/// exceeds 10^3 and `|g|` decays across the interval, integration runs in
/// log space internally.
pub fn integrate<T: Real, G: Fn(T) -> T>(g: G, a: T, b: T, rel_tol: T) -> Result<QuadResult<T>> {
    check_rel_tol(rel_tol)?;
    let two = cast::<T>(2.0);
    if a < two || a > b || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidBounds {
            a: as_f64(a),
            b: as_f64(b),
        });
    }
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            abs_error_estimate: T::zero(),
            subdivisions: 1,
        });
    }
    let ga = eval_checked(&g, a)?;
    let gb = eval_checked(&g, b)?;
    if b / a > cast(1e3) && gb.abs() < ga.abs() {
        let transformed = |u: T| {
            let t = u.exp();
            g(t) * t
        };
        integrate_core(&transformed, a.ln(), b.ln(), rel_tol, MAX_INTERVALS)
    } else {
        integrate_core(&g, a, b, rel_tol, MAX_INTERVALS)
    }
}

/// [`integrate`] with an explicit interval cap (mostly for tests).
pub fn integrate_with_limit<T: Real, G: Fn(T) -> T>(
    g: G,
    a: T,
    b: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<QuadResult<T>> {
    check_rel_tol(rel_tol)?;
    let two = cast::<T>(2.0);
    if a < two || a > b || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidBounds {
            a: as_f64(a),
            b: as_f64(b),
        });
    }
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            abs_error_estimate: T::zero(),
            subdivisions: 1,
        });
    }
    integrate_core(&g, a, b, rel_tol, max_intervals)
}

/// Main term integral of f: `int_2^n f(t)/log t dt`.
pub fn li_main<T: Real>(spec: &FunctionSpec<T>, n: u64, rel_tol: T) -> Result<QuadResult<T>> {
    if n < 3 {
        return Err(Error::InvalidBounds {
            a: 2.0,
            b: n as f64,
        });
    }
    let upper = cast_u64::<T>(n);
    integrate(|t: T| spec.eval(t) / t.ln(), cast(2.0), upper, rel_tol)
}

/// Remainder-bound integral under the given weight.
pub fn remainder_integral<T: Real>(
    spec: &FunctionSpec<T>,
    n: u64,
    weight: RemainderWeight<T>,
    rel_tol: T,
) -> Result<QuadResult<T>> {
    if n < 3 {
        return Err(Error::InvalidBounds {
            a: 2.0,
            b: n as f64,
        });
    }
    if let RemainderWeight::Pnt { c, theta } = weight {
        if c <= T::zero() || !c.is_finite() {
            return Err(Error::InvalidModel(format!("pnt weight requires c > 0, got {}", as_f64(c))));
        }
        if theta <= T::zero() || theta >= T::one() {
            return Err(Error::InvalidModel(format!(
                "pnt exponent theta must lie in (0, 1), got {}",
                as_f64(theta)
            )));
        }
    }
    let upper = cast_u64::<T>(n);
    let g = move |t: T| {
        let df = spec.deriv(t).abs();
        match weight {
            RemainderWeight::Crude => {
                let ln_t = t.ln();
                t * df / (ln_t * ln_t)
            }
            RemainderWeight::Pnt { c, theta } => t * df * (-c * t.ln().powf(theta)).exp(),
            RemainderWeight::Rh => df * t.sqrt() * t.ln(),
        }
    };
    integrate(g, cast(2.0), upper, rel_tol)
}

fn eval_checked<T: Real, G: Fn(T) -> T>(g: &G, t: T) -> Result<T> {
    let v = g(t);
    if !v.is_finite() {
        return Err(Error::NonFiniteIntegrand { t: as_f64(t) });
    }
    Ok(v)
}

struct Interval<T> {
    a: T,
    fa: T,
    m: T,
    fm: T,
    b: T,
    fb: T,
    estimate: T,
    tol: T,
}

fn simpson<T: Real>(a: T, fa: T, fm: T, fb: T, b: T) -> T {
    let six = cast::<T>(6.0);
    let four = cast::<T>(4.0);
    (b - a) / six * (fa + four * fm + fb)
}

fn adaptive_pass<T: Real, G: Fn(T) -> T>(
    g: &G,
    a: T,
    b: T,
    abs_tol: T,
    max_intervals: usize,
) -> Result<QuadResult<T>> {
    let half = cast::<T>(0.5);
    let fifteen = cast::<T>(15.0);
    let width_floor = (a.abs().max(b.abs()) * T::epsilon()) * cast(4.0);

    let fa = eval_checked(g, a)?;
    let fb = eval_checked(g, b)?;
    let m = (a + b) * half;
    let fm = eval_checked(g, m)?;
    let mut stack = vec![Interval {
        a,
        fa,
        m,
        fm,
        b,
        fb,
        estimate: simpson(a, fa, fm, fb, b),
        tol: abs_tol,
    }];

    let mut total = KahanSum::new();
    let mut err = T::zero();
    let mut leaves = 0usize;
    let mut created = 1usize;

    while let Some(iv) = stack.pop() {
        let lm = (iv.a + iv.m) * half;
        let rm = (iv.m + iv.b) * half;
        let flm = eval_checked(g, lm)?;
        let frm = eval_checked(g, rm)?;
        let s_left = simpson(iv.a, iv.fa, flm, iv.fm, iv.m);
        let s_right = simpson(iv.m, iv.fm, frm, iv.fb, iv.b);
        let s2 = s_left + s_right;
        let delta = s2 - iv.estimate;
        let converged = delta.abs() <= fifteen * iv.tol;
        let too_narrow = (iv.b - iv.a) <= width_floor;
        if converged || too_narrow {
            total.add(s2 + delta / fifteen);
            err += delta.abs() / fifteen;
            leaves += 2;
        } else {
            created += 2;
            if created > max_intervals {
                return Err(Error::MaxSubdivisions {
                    limit: max_intervals,
                });
            }
            let child_tol = iv.tol * half;
            stack.push(Interval {
                a: iv.m,
                fa: iv.fm,
                m: rm,
                fm: frm,
                b: iv.b,
                fb: iv.fb,
                estimate: s_right,
                tol: child_tol,
            });
            stack.push(Interval {
                a: iv.a,
                fa: iv.fa,
                m: lm,
                fm: flm,
                b: iv.m,
                fb: iv.fm,
                estimate: s_left,
                tol: child_tol,
            });
        }
    }

    Ok(QuadResult {
        value: total.value(),
        abs_error_estimate: err,
        subdivisions: leaves.max(1),
    })
}

fn integrate_core<T: Real, G: Fn(T) -> T>(
    g: &G,
    a: T,
    b: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<QuadResult<T>> {
    let floor = cast::<T>(ABS_FLOOR);
    let half = cast::<T>(0.5);
    let fa = eval_checked(g, a)?;
    let fb = eval_checked(g, b)?;
    let m = (a + b) * half;
    let fm = eval_checked(g, m)?;
    let rough = simpson(a, fa, fm, fb, b);

    let tol0 = (rel_tol * rough.abs()).max(floor);
    let first = adaptive_pass(g, a, b, tol0, max_intervals)?;

    // The initial Simpson estimate can be far off for strongly varying
    // integrands; rerun once with a target scaled to the real magnitude.
    let tol1 = (rel_tol * first.value.abs()).max(floor);
    if tol1 * cast(4.0) < tol0 {
        return adaptive_pass(g, a, b, tol1, max_intervals);
    }
    Ok(first)
}

/// Cumulative table of `J1(t) = int_2^t du/log u` at geometric breakpoints,
/// refined locally with fixed Simpson panels. Immutable after construction;
/// safe for concurrent reads.
pub struct LiTable<T> {
    breakpoints: Vec<T>,
    cumulative: Vec<T>,
}

const LI_TABLE_RATIO: f64 = 1.189207115002721; // 2^(1/4)
const LI_PANELS: usize = 32;

impl<T: Real> LiTable<T> {
    /// Build a table covering `[2, max]`.
    pub fn new(max: T) -> Result<Self> {
        let two = cast::<T>(2.0);
        if max < two || !max.is_finite() {
            return Err(Error::InvalidBounds {
                a: 2.0,
                b: as_f64(max),
            });
        }
        let ratio = cast::<T>(LI_TABLE_RATIO);
        let mut breakpoints = vec![two];
        let mut cumulative = vec![T::zero()];
        let mut acc = KahanSum::new();
        while *breakpoints.last().unwrap() < max {
            let prev = *breakpoints.last().unwrap();
            let next = (prev * ratio).min(max.max(prev * ratio)); // strictly grows
            acc.add(fixed_simpson(prev, next, LI_PANELS));
            breakpoints.push(next);
            cumulative.push(acc.value());
            if next >= max {
                break;
            }
        }
        Ok(Self {
            breakpoints,
            cumulative,
        })
    }

    /// Largest tabulated abscissa.
    pub fn max(&self) -> T {
        *self.breakpoints.last().unwrap()
    }

    /// J1(t). `t` is clamped into `[2, max]` to absorb substitution round-off.
    pub fn eval(&self, t: T) -> T {
        let t = t.max(cast(2.0)).min(self.max());
        let idx = match self
            .breakpoints
            .binary_search_by(|bp| bp.partial_cmp(&t).expect("finite breakpoints"))
        {
            Ok(i) => return self.cumulative[i],
            Err(i) => i - 1, // t > breakpoints[0] here
        };
        self.cumulative[idx] + fixed_simpson(self.breakpoints[idx], t, LI_PANELS)
    }
}

/// Composite Simpson for `1/log u` with a fixed panel count.
fn fixed_simpson<T: Real>(a: T, b: T, panels: usize) -> T {
    let g = |u: T| u.ln().recip();
    let n = 2 * panels;
    let h = (b - a) / cast_u64::<T>(n as u64);
    let mut acc = KahanSum::new();
    acc.add(g(a));
    acc.add(g(b));
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    for i in 1..n {
        let u = a + h * cast_u64::<T>(i as u64);
        let w = if i % 2 == 1 { four } else { two };
        acc.add(w * g(u));
    }
    acc.value() * h / cast(3.0)
}

/// Both sides of the rewrite of `int_2^n J1(t) f'(t) dt` by parts:
/// `lhs = int_2^n J1(t) f'(t) dt`, `rhs = f(n) J1(n) - int_2^n f(t)/log t dt`.
///
/// `rel_diff` is measured against the largest term participating in the
/// identity, since both sides can be near-cancelling differences of much
/// larger quantities (f = 1 makes both sides exactly zero in principle).
#[derive(Copy, Clone, Debug)]
pub struct IbpIdentity<T> {
    pub lhs: T,
    pub rhs: T,
    pub rel_diff: T,
}

/// Numerically verify the integration-by-parts identity at `n`.
pub fn ibp_identity<T: Real>(spec: &FunctionSpec<T>, n: u64, rel_tol: T) -> Result<IbpIdentity<T>> {
    if n < 3 {
        return Err(Error::InvalidBounds {
            a: 2.0,
            b: n as f64,
        });
    }
    let upper = cast_u64::<T>(n);
    let table = LiTable::new(upper)?;
    let lhs = integrate(|t: T| table.eval(t) * spec.deriv(t), cast(2.0), upper, rel_tol)?.value;
    let main = li_main(spec, n, rel_tol)?.value;
    let boundary = spec.eval(upper) * table.eval(upper);
    let rhs = boundary - main;
    let scale = lhs
        .abs()
        .max(rhs.abs())
        .max(boundary.abs())
        .max(main.abs())
        .max(cast(1e-30));
    Ok(IbpIdentity {
        lhs,
        rhs,
        rel_diff: (lhs - rhs).abs() / scale,
    })
}
