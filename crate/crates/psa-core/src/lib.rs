//! Exact sums of functions over primes, their logarithmic-integral main
//! terms, and remainder bounds under three error models, together with
//! numeric checks of the sufficient and necessary conditions for the
//! prime-weighted and `1/log k`-weighted sums to agree asymptotically.
//!
//! The analysis layer is generic over the scalar type via [`Real`]
//! (`f32`/`f64`); concrete `f64` aliases are exported at the crate root.
//! The sieve layer works in `u64`.
//!
//! ```
//! use psa_core::asymptotic::{estimate_pnt, ErrorModel};
//! use psa_core::functions::{builtin, Family, Params};
//! use psa_core::primes::PrimeEngine;
//! use psa_core::sums::exact_sum;
//!
//! let engine = PrimeEngine::default();
//! let one = builtin::<f64>(Family::One, Params::none())?;
//!
//! // pi(10^5) exactly, and its logarithmic-integral estimate with a bound
//! let pi = exact_sum(&engine, &one, 100_000)?;
//! let est = estimate_pnt(&one, 100_000, &ErrorModel::pnt())?;
//! assert_eq!(pi.value.linear(), 9592.0);
//! assert!((pi.value.linear() - est.main).abs() < est.bound);
//! # Ok::<(), psa_core::Error>(())
//! ```

pub mod asymptotic;
pub mod conditions;
pub mod error;
pub mod functions;
pub mod kahan;
pub mod logspace;
pub mod primes;
pub mod quad;
mod real;
pub mod sums;

pub use error::{Error, Result};
pub use kahan::KahanSum;
pub use logspace::SignedLog;
pub use real::Real;

/// `f64` instantiations of the generic analysis types.
pub type FunctionSpec64 = functions::FunctionSpec<f64>;
pub type Params64 = functions::Params<f64>;
pub type SignedLog64 = logspace::SignedLog<f64>;
pub type QuadResult64 = quad::QuadResult<f64>;
pub type ExactSum64 = sums::ExactSum<f64>;
pub type ErrorModel64 = asymptotic::ErrorModel<f64>;
pub type AsymptoticEstimate64 = asymptotic::AsymptoticEstimate<f64>;
pub type MainTermForm64 = asymptotic::MainTermForm<f64>;
pub type ConditionReport64 = conditions::ConditionReport<f64>;
pub type ConditionThresholds64 = conditions::ConditionThresholds<f64>;
