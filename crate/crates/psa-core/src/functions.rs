//! Catalog of the functions whose prime sums are studied.
//!
//! A [`FunctionSpec`] bundles the evaluator, its exact derivative,
//! monotonicity and growth-class metadata, and (for exponentially growing
//! functions) a log-space evaluator. Built-in families are parametric; user
//! code can construct arbitrary specs through [`FunctionSpec::new`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logspace::SignedLog;
use crate::real::{as_f64, cast, Real};

/// Probe abscissae for derivative and monotonicity validation.
pub const PROBE_GRID: [f64; 5] = [2.0, 10.0, 100.0, 1e4, 1e6];

/// Relative tolerance for the finite-difference derivative check.
pub const DERIV_CHECK_REL_TOL: f64 = 1e-6;

/// Built-in function families.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// f(t) = 1
    One,
    /// f(t) = log t
    Log,
    /// f(t) = 1/t
    Recip,
    /// f(t) = log(t) / t
    LogOverT,
    /// f(t) = t^m, m > -1
    Power,
    /// f(t) = t^m log^k t, m > -1, integer k >= 0
    PowerLog,
    /// f(t) = 2^t
    Exp2,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::One,
        Family::Log,
        Family::Recip,
        Family::LogOverT,
        Family::Power,
        Family::PowerLog,
        Family::Exp2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::One => "one",
            Family::Log => "log",
            Family::Recip => "recip",
            Family::LogOverT => "log_over_t",
            Family::Power => "power",
            Family::PowerLog => "power_log",
            Family::Exp2 => "exp2",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Family parameters: `m` exponent and `k` log-power.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize)]
pub struct Params<T> {
    pub m: Option<T>,
    pub k: Option<u32>,
}

impl<T> Params<T> {
    pub fn none() -> Self {
        Self { m: None, k: None }
    }

    pub fn m(m: T) -> Self {
        Self {
            m: Some(m),
            k: None,
        }
    }

    pub fn mk(m: T, k: u32) -> Self {
        Self {
            m: Some(m),
            k: Some(k),
        }
    }
}

/// Monotonicity of `f` on `[2, inf)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    /// f' identically zero. Monotone in the weak sense; admissible wherever
    /// monotonicity is required, and reported as degenerate by the condition
    /// checker.
    Constant,
    /// Not monotone on the whole interval.
    None,
}

impl Monotonicity {
    /// Whether the function counts as monotone for estimator hypotheses.
    pub fn is_monotone(self) -> bool {
        !matches!(self, Monotonicity::None)
    }
}

/// Growth class of `f` on `[2, inf)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Bounded,
    Polylog,
    Polynomial,
    Exponential,
}

type Eval<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
type LogEval<T> = Arc<dyn Fn(T) -> SignedLog<T> + Send + Sync>;

/// A differentiable function on `[2, inf)` with derivative and metadata.
///
/// Immutable; evaluation is pure, so values are safe to share across threads.
#[derive(Clone)]
pub struct FunctionSpec<T: Real> {
    id: String,
    family: Option<Family>,
    params: Params<T>,
    eval: Eval<T>,
    deriv: Eval<T>,
    monotone: Monotonicity,
    growth: Growth,
    log_eval: Option<LogEval<T>>,
}

impl<T: Real> fmt::Debug for FunctionSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("monotone", &self.monotone)
            .field("growth", &self.growth)
            .finish_non_exhaustive()
    }
}

impl<T: Real> FunctionSpec<T> {
    /// Construct a user-defined spec. Built-ins come from [`builtin`].
    pub fn new(
        id: impl Into<String>,
        eval: impl Fn(T) -> T + Send + Sync + 'static,
        deriv: impl Fn(T) -> T + Send + Sync + 'static,
        monotone: Monotonicity,
        growth: Growth,
    ) -> Self {
        Self {
            id: id.into(),
            family: None,
            params: Params::none(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            monotone,
            growth,
            log_eval: None,
        }
    }

    pub fn with_log_eval(
        mut self,
        log_eval: impl Fn(T) -> SignedLog<T> + Send + Sync + 'static,
    ) -> Self {
        self.log_eval = Some(Arc::new(log_eval));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn params(&self) -> Params<T> {
        self.params
    }

    /// f(t)
    #[inline]
    pub fn eval(&self, t: T) -> T {
        (self.eval)(t)
    }

    /// f'(t)
    #[inline]
    pub fn deriv(&self, t: T) -> T {
        (self.deriv)(t)
    }

    /// log-space f(t), when provided.
    pub fn log_eval(&self, t: T) -> Option<SignedLog<T>> {
        self.log_eval.as_ref().map(|g| g(t))
    }

    pub fn has_log_eval(&self) -> bool {
        self.log_eval.is_some()
    }

    pub fn monotone(&self) -> Monotonicity {
        self.monotone
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }
}

fn invalid<T>(id: &str, reason: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams {
        id: id.to_string(),
        reason: reason.into(),
    })
}

/// Build a fully populated spec for a built-in family.
pub fn builtin<T: Real>(family: Family, params: Params<T>) -> Result<FunctionSpec<T>> {
    let id = family.id();
    let needs_no_params = |p: &Params<T>| -> Result<()> {
        if p.m.is_some() || p.k.is_some() {
            invalid(id, "family takes no parameters")
        } else {
            Ok(())
        }
    };
    let one: T = T::one();
    let spec = match family {
        Family::One => {
            needs_no_params(&params)?;
            FunctionSpec::new(id, move |_| one, |_| T::zero(), Monotonicity::Constant, Growth::Bounded)
        }
        Family::Log => {
            needs_no_params(&params)?;
            FunctionSpec::new(
                id,
                |t: T| t.ln(),
                |t: T| t.recip(),
                Monotonicity::Increasing,
                Growth::Polylog,
            )
        }
        Family::Recip => {
            needs_no_params(&params)?;
            FunctionSpec::new(
                id,
                |t: T| t.recip(),
                |t: T| -(t * t).recip(),
                Monotonicity::Decreasing,
                Growth::Bounded,
            )
        }
        Family::LogOverT => {
            needs_no_params(&params)?;
            FunctionSpec::new(
                id,
                |t: T| t.ln() / t,
                |t: T| (T::one() - t.ln()) / (t * t),
                Monotonicity::None,
                Growth::Bounded,
            )
        }
        Family::Power => {
            if params.k.is_some() {
                return invalid(id, "takes only the exponent m");
            }
            let m = match params.m {
                Some(m) => m,
                None => return invalid(id, "missing exponent m"),
            };
            if m <= -T::one() {
                return invalid(id, format!("m = {} but the family requires m > -1", as_f64(m)));
            }
            power_spec(id, m)
        }
        Family::PowerLog => {
            let m = match params.m {
                Some(m) => m,
                None => return invalid(id, "missing exponent m"),
            };
            let k = match params.k {
                Some(k) => k,
                None => return invalid(id, "missing log-power k"),
            };
            if m <= -T::one() {
                return invalid(id, format!("m = {} but the family requires m > -1", as_f64(m)));
            }
            power_log_spec(id, m, k)
        }
        Family::Exp2 => {
            needs_no_params(&params)?;
            let ln2 = cast::<T>(std::f64::consts::LN_2);
            FunctionSpec::new(
                id,
                move |t: T| (t * ln2).exp(),
                move |t: T| (t * ln2).exp() * ln2,
                Monotonicity::Increasing,
                Growth::Exponential,
            )
            .with_log_eval(move |t: T| SignedLog::new(1, t * ln2))
        }
    };
    let mut spec = spec;
    spec.family = Some(family);
    spec.params = params;
    Ok(spec)
}

/// [`builtin`] with a string id, for CLI use.
pub fn builtin_by_id<T: Real>(id: &str, params: Params<T>) -> Result<FunctionSpec<T>> {
    builtin(id.parse::<Family>()?, params)
}

fn power_spec<T: Real>(id: &str, m: T) -> FunctionSpec<T> {
    let monotone = if m > T::zero() {
        Monotonicity::Increasing
    } else if m == T::zero() {
        Monotonicity::Constant
    } else {
        Monotonicity::Decreasing
    };
    let growth = if m > T::zero() {
        Growth::Polynomial
    } else {
        Growth::Bounded
    };
    FunctionSpec::new(
        id,
        move |t: T| t.powf(m),
        move |t: T| m * t.powf(m - T::one()),
        monotone,
        growth,
    )
}

fn power_log_spec<T: Real>(id: &str, m: T, k: u32) -> FunctionSpec<T> {
    let kf = cast::<T>(f64::from(k));
    let monotone = if m > T::zero() || (m == T::zero() && k > 0) {
        Monotonicity::Increasing
    } else if m == T::zero() {
        Monotonicity::Constant
    } else if k == 0 {
        Monotonicity::Decreasing
    } else {
        // sign of f' flips where m log t + k = 0, at t* = exp(k / -m)
        let t_star = (kf / -m).exp();
        if t_star <= T::one() + T::one() {
            Monotonicity::Decreasing
        } else {
            Monotonicity::None
        }
    };
    let growth = if m > T::zero() {
        Growth::Polynomial
    } else if m == T::zero() && k > 0 {
        Growth::Polylog
    } else {
        Growth::Bounded
    };
    let ki = k as i32;
    FunctionSpec::new(
        id,
        move |t: T| t.powf(m) * t.ln().powi(ki),
        move |t: T| {
            let tm1 = t.powf(m - T::one());
            let ln_t = t.ln();
            let mut d = m * tm1 * ln_t.powi(ki);
            if k > 0 {
                d += kf * tm1 * ln_t.powi(ki - 1);
            }
            d
        },
        monotone,
        growth,
    )
}

/// A spec-invariant violation found by [`validate`]. Violations are data,
/// not failures.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Violation {
    DerivativeMismatch {
        t: f64,
        analytic: f64,
        finite_difference: f64,
        rel_err: f64,
    },
    MonotonicityMismatch {
        t: f64,
        deriv: f64,
    },
    MissingLogEval,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DerivativeMismatch {
                t,
                analytic,
                finite_difference,
                rel_err,
            } => write!(
                f,
                "derivative mismatch at t = {t}: analytic {analytic:e}, finite difference {finite_difference:e} (rel err {rel_err:e})"
            ),
            Violation::MonotonicityMismatch { t, deriv } => {
                write!(f, "monotonicity flag contradicts f'({t}) = {deriv:e}")
            }
            Violation::MissingLogEval => {
                write!(f, "exponential growth declared without a log-space evaluator")
            }
        }
    }
}

/// Check the derivative against a central finite difference on the probe
/// grid and the monotonicity flag against the derivative's sign.
pub fn validate<T: Real>(spec: &FunctionSpec<T>) -> Vec<Violation> {
    let mut out = Vec::new();
    let tiny = cast::<T>(1e-300);
    let rel_floor = cast::<T>(1e-12);
    let tol = cast::<T>(DERIV_CHECK_REL_TOL);
    for &t_probe in &PROBE_GRID {
        let t = cast::<T>(t_probe);
        let h = t * cast::<T>(1e-6);
        let d = spec.deriv(t);
        let f_hi = spec.eval(t + h);
        let f_lo = spec.eval(t - h);
        if d.is_finite() && f_hi.is_finite() && f_lo.is_finite() && d.abs() >= tiny {
            let fd = (f_hi - f_lo) / (h + h);
            let rel = (d - fd).abs() / d.abs().max(rel_floor);
            if rel > tol {
                out.push(Violation::DerivativeMismatch {
                    t: t_probe,
                    analytic: as_f64(d),
                    finite_difference: as_f64(fd),
                    rel_err: as_f64(rel),
                });
            }
        }
        let contradiction = match spec.monotone() {
            Monotonicity::Increasing => d < T::zero(),
            Monotonicity::Decreasing => d > T::zero(),
            Monotonicity::Constant => d.abs() > tiny,
            Monotonicity::None => false,
        };
        if contradiction {
            out.push(Violation::MonotonicityMismatch {
                t: t_probe,
                deriv: as_f64(d),
            });
        }
    }
    if spec.growth() == Growth::Exponential && !spec.has_log_eval() {
        out.push(Violation::MissingLogEval);
    }
    out
}
