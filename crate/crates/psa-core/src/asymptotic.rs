//! Asymptotic main terms and remainder-bound values for prime sums.
//!
//! Three error models are supported, differing in the assumed size of the
//! prime-counting error:
//!
//! * `crude`  - main `n f(n)/log n - int t f'/log t`, bound scale `n/log^2 n`;
//! * `pnt`    - main `int f/log t`, bound scale `n exp(-c (log n)^theta)`;
//! * `rh`     - main `int f/log t`, bound scale `sqrt(n) log n` (conditional).
//!
//! Bounds are reported as values with the O-constant set to one; the
//! constants `c`, `c1`, `c2`, `epsilon` and the exponent `theta` are not
//! pinned by theory and stay caller-configurable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{Family, FunctionSpec, Monotonicity};
use crate::quad::{self, RemainderWeight, DEFAULT_BOUND_REL_TOL, DEFAULT_MAIN_REL_TOL};
use crate::real::{as_f64, cast, cast_u64, Real};

/// Which remainder model an estimate was produced under.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Crude,
    Pnt,
    Rh,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Crude => "crude",
            ModelKind::Pnt => "pnt",
            ModelKind::Rh => "rh",
        })
    }
}

/// Remainder-model constants. All strictly positive; `epsilon < 1/2`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct ErrorModel<T> {
    pub kind: ModelKind,
    /// Exponential-saving constant in `exp(-c (log n)^theta)`.
    pub c: T,
    /// Crude product-bound constant.
    pub c1: T,
    /// Conditional product-bound constant.
    pub c2: T,
    /// Conditional product-bound exponent offset.
    pub epsilon: T,
    /// Exponent in the pnt weight (0.5 unless exploring sharper savings).
    pub theta: T,
}

impl<T: Real> ErrorModel<T> {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            kind,
            c: T::one(),
            c1: T::one(),
            c2: T::one(),
            epsilon: cast(0.05),
            theta: cast(0.5),
        }
    }

    pub fn crude() -> Self {
        Self::new(ModelKind::Crude)
    }

    pub fn pnt() -> Self {
        Self::new(ModelKind::Pnt)
    }

    pub fn rh() -> Self {
        Self::new(ModelKind::Rh)
    }

    pub fn validate(&self) -> Result<()> {
        let half = cast::<T>(0.5);
        let all_finite = self.c.is_finite()
            && self.c1.is_finite()
            && self.c2.is_finite()
            && self.epsilon.is_finite()
            && self.theta.is_finite();
        if !all_finite {
            return Err(Error::InvalidModel("constants must be finite".into()));
        }
        if self.c <= T::zero() || self.c1 <= T::zero() || self.c2 <= T::zero() {
            return Err(Error::InvalidModel("constants must be strictly positive".into()));
        }
        if self.epsilon <= T::zero() || self.epsilon >= half {
            return Err(Error::InvalidModel(format!(
                "epsilon must lie in (0, 1/2), got {}",
                as_f64(self.epsilon)
            )));
        }
        if self.theta <= T::zero() || self.theta >= T::one() {
            return Err(Error::InvalidModel(format!(
                "theta must lie in (0, 1), got {}",
                as_f64(self.theta)
            )));
        }
        Ok(())
    }
}

/// Labeled breakdown of an estimate. The main pieces sum to `main`, the
/// bound pieces to `bound`.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct EstimatePieces<T> {
    pub main_boundary: T,
    pub main_integral: T,
    pub bound_boundary: T,
    pub bound_integral: T,
}

/// Main term plus remainder-bound value at one `n`.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct AsymptoticEstimate<T> {
    pub n: u64,
    pub main: T,
    pub bound: T,
    pub model: ErrorModel<T>,
    pub pieces: EstimatePieces<T>,
}

fn validated<T: Real>(n: u64, model: &ErrorModel<T>) -> Result<()> {
    model.validate()?;
    if n < 3 {
        return Err(Error::InvalidBounds {
            a: 2.0,
            b: n as f64,
        });
    }
    Ok(())
}

fn require_monotone<T: Real>(spec: &FunctionSpec<T>, model: ModelKind) -> Result<()> {
    if spec.monotone() == Monotonicity::None {
        return Err(Error::HypothesisViolation {
            id: spec.id().to_string(),
            requirement: format!("the {model} estimate requires f monotone on [2, n]"),
        });
    }
    Ok(())
}

/// Estimate under the crude model:
/// main `n f(n)/log n - int_2^n t f'(t)/log t dt`,
/// bound `n |f(n)|/log^2 n + int_2^n t |f'(t)|/log^2 t dt`.
///
/// No monotonicity is required here: the crude expansion only
/// needs a continuous derivative.
pub fn estimate_crude<T: Real>(
    spec: &FunctionSpec<T>,
    n: u64,
    model: &ErrorModel<T>,
) -> Result<AsymptoticEstimate<T>> {
    validated(n, model)?;
    let nf = cast_u64::<T>(n);
    let ln_n = nf.ln();
    let main_boundary = nf * spec.eval(nf) / ln_n;
    let main_integral = -quad::integrate(
        |t: T| t * spec.deriv(t) / t.ln(),
        cast(2.0),
        nf,
        cast(DEFAULT_MAIN_REL_TOL),
    )?
    .value;
    let bound_boundary = nf * spec.eval(nf).abs() / (ln_n * ln_n);
    let bound_integral =
        quad::remainder_integral(spec, n, RemainderWeight::Crude, cast(DEFAULT_BOUND_REL_TOL))?.value;
    Ok(AsymptoticEstimate {
        n,
        main: main_boundary + main_integral,
        bound: bound_boundary + bound_integral,
        model: ErrorModel {
            kind: ModelKind::Crude,
            ..*model
        },
        pieces: EstimatePieces {
            main_boundary,
            main_integral,
            bound_boundary,
            bound_integral,
        },
    })
}

/// Estimate under the unconditional exponential-saving model:
/// main `int_2^n f(t)/log t dt`,
/// bound `|f(n)| n exp(-c (log n)^theta) + int_2^n t |f'(t)| exp(-c (log t)^theta) dt`.
pub fn estimate_pnt<T: Real>(
    spec: &FunctionSpec<T>,
    n: u64,
    model: &ErrorModel<T>,
) -> Result<AsymptoticEstimate<T>> {
    validated(n, model)?;
    require_monotone(spec, ModelKind::Pnt)?;
    let nf = cast_u64::<T>(n);
    let main_integral = quad::li_main(spec, n, cast(DEFAULT_MAIN_REL_TOL))?.value;
    let bound_boundary = spec.eval(nf).abs() * nf * (-model.c * nf.ln().powf(model.theta)).exp();
    let bound_integral = quad::remainder_integral(
        spec,
        n,
        RemainderWeight::Pnt {
            c: model.c,
            theta: model.theta,
        },
        cast(DEFAULT_BOUND_REL_TOL),
    )?
    .value;
    Ok(AsymptoticEstimate {
        n,
        main: main_integral,
        bound: bound_boundary + bound_integral,
        model: ErrorModel {
            kind: ModelKind::Pnt,
            ..*model
        },
        pieces: EstimatePieces {
            main_boundary: T::zero(),
            main_integral,
            bound_boundary,
            bound_integral,
        },
    })
}

/// Estimate under the conditional square-root model:
/// main as in [`estimate_pnt`],
/// bound `|f(n)| sqrt(n) log n + int_2^n |f'(t)| sqrt(t) log t dt`.
pub fn estimate_rh<T: Real>(
    spec: &FunctionSpec<T>,
    n: u64,
    model: &ErrorModel<T>,
) -> Result<AsymptoticEstimate<T>> {
    validated(n, model)?;
    require_monotone(spec, ModelKind::Rh)?;
    let nf = cast_u64::<T>(n);
    let main_integral = quad::li_main(spec, n, cast(DEFAULT_MAIN_REL_TOL))?.value;
    let bound_boundary = spec.eval(nf).abs() * nf.sqrt() * nf.ln();
    let bound_integral =
        quad::remainder_integral(spec, n, RemainderWeight::Rh, cast(DEFAULT_BOUND_REL_TOL))?.value;
    Ok(AsymptoticEstimate {
        n,
        main: main_integral,
        bound: bound_boundary + bound_integral,
        model: ErrorModel {
            kind: ModelKind::Rh,
            ..*model
        },
        pieces: EstimatePieces {
            main_boundary: T::zero(),
            main_integral,
            bound_boundary,
            bound_integral,
        },
    })
}

/// Dispatch on `model.kind`.
pub fn estimate<T: Real>(
    spec: &FunctionSpec<T>,
    n: u64,
    model: &ErrorModel<T>,
) -> Result<AsymptoticEstimate<T>> {
    match model.kind {
        ModelKind::Crude => estimate_crude(spec, n, model),
        ModelKind::Pnt => estimate_pnt(spec, n, model),
        ModelKind::Rh => estimate_rh(spec, n, model),
    }
}

/// Symbolic closed-form main-term descriptor for a catalog entry.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum MainTermForm<T> {
    /// n / log n
    NOverLogN,
    /// n
    N,
    /// log log n
    LogLogN,
    /// log n
    LogN,
    /// n^(m+1) / ((m+1) log n)
    PowerOverLog { m: T },
    /// n^(m+1) log^(k-1) n / (m+1), the leading term after one
    /// integration-by-parts step
    PowerLogLeading { m: T, k: u32 },
    /// No closed form; evaluate the main term by quadrature.
    QuadratureOnly,
}

impl<T: Real> MainTermForm<T> {
    /// Descriptor for a spec (user-defined specs are quadrature-only).
    pub fn for_function(spec: &FunctionSpec<T>) -> Self {
        match spec.family() {
            Some(Family::One) => MainTermForm::NOverLogN,
            Some(Family::Log) => MainTermForm::N,
            Some(Family::Recip) => MainTermForm::LogLogN,
            Some(Family::LogOverT) => MainTermForm::LogN,
            Some(Family::Power) => MainTermForm::PowerOverLog {
                m: spec.params().m.expect("power has m"),
            },
            Some(Family::PowerLog) => MainTermForm::PowerLogLeading {
                m: spec.params().m.expect("power_log has m"),
                k: spec.params().k.expect("power_log has k"),
            },
            Some(Family::Exp2) | None => MainTermForm::QuadratureOnly,
        }
    }

    /// Evaluate at a real abscissa; `None` for quadrature-only entries.
    pub fn evaluate_at(&self, x: T) -> Option<T> {
        let ln_x = x.ln();
        match *self {
            MainTermForm::NOverLogN => Some(x / ln_x),
            MainTermForm::N => Some(x),
            MainTermForm::LogLogN => Some(ln_x.ln()),
            MainTermForm::LogN => Some(ln_x),
            MainTermForm::PowerOverLog { m } => {
                Some(x.powf(m + T::one()) / ((m + T::one()) * ln_x))
            }
            MainTermForm::PowerLogLeading { m, k } => {
                Some(x.powf(m + T::one()) * ln_x.powi(k as i32 - 1) / (m + T::one()))
            }
            MainTermForm::QuadratureOnly => None,
        }
    }
}

/// A catalog entry: the spec plus its main-term descriptor.
#[derive(Clone, Debug)]
pub struct CatalogEntry<T: Real> {
    pub spec: FunctionSpec<T>,
    pub closed_main: MainTermForm<T>,
}

/// Build the catalog entry for a built-in family.
pub fn catalog_entry<T: Real>(
    family: Family,
    params: crate::functions::Params<T>,
) -> Result<CatalogEntry<T>> {
    let spec = crate::functions::builtin(family, params)?;
    let closed_main = MainTermForm::for_function(&spec);
    Ok(CatalogEntry { spec, closed_main })
}

/// Closed-form main term at integer `n`; `None` when unsupported.
pub fn closed_main<T: Real>(spec: &FunctionSpec<T>, n: u64) -> Option<T> {
    closed_main_at(spec, cast_u64(n))
}

/// Closed-form main term at a real abscissa.
pub fn closed_main_at<T: Real>(spec: &FunctionSpec<T>, x: T) -> Option<T> {
    MainTermForm::for_function(spec).evaluate_at(x)
}

/// Logarithm of the prime-product upper bound:
/// `n + c1 n/log n` (crude/pnt) or `n + c2 n^(1/2 + epsilon)` (rh).
pub fn product_bound_log<T: Real>(n: u64, model: &ErrorModel<T>) -> Result<T> {
    model.validate()?;
    if n < 2 {
        return Err(Error::InvalidBounds {
            a: 2.0,
            b: n as f64,
        });
    }
    let nf = cast_u64::<T>(n);
    Ok(match model.kind {
        ModelKind::Crude | ModelKind::Pnt => nf + model.c1 * nf / nf.ln(),
        ModelKind::Rh => nf + model.c2 * nf.powf(cast::<T>(0.5) + model.epsilon),
    })
}

/// The two main terms and their gap. `main_integral` (the li-type form)
/// rewritten by parts reproduces `main_direct` (the crude form) up to
/// lower-order terms; `ratio` is `|difference| / crude bound`.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct ConsistencyTransform<T> {
    pub n: u64,
    pub main_integral: T,
    pub main_direct: T,
    pub difference: T,
    pub crude_bound: T,
    pub ratio: T,
}

/// Compare the two main-term forms at `n`.
///
/// The gap between them is a genuine lower-order term but its ratio to the
/// crude bound tends to 1 from above for slowly varying f (for f = 1 it is
/// `int_2^n dt/log^2 t - 2/log 2` against `n/log^2 n`), so callers should
/// treat `ratio <= 2` as agreement at desk scale rather than expecting
/// `ratio <= 1` pointwise.
pub fn consistency_transform<T: Real>(spec: &FunctionSpec<T>, n: u64) -> Result<ConsistencyTransform<T>> {
    let model = ErrorModel::crude();
    let crude = estimate_crude(spec, n, &model)?;
    let main_integral = quad::li_main(spec, n, cast(DEFAULT_MAIN_REL_TOL))?.value;
    let difference = main_integral - crude.main;
    Ok(ConsistencyTransform {
        n,
        main_integral,
        main_direct: crude.main,
        difference,
        crude_bound: crude.bound,
        ratio: difference.abs() / crude.bound,
    })
}
