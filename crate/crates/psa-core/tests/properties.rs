//! Property tests for the structural invariants: tiling, monotone counting,
//! quadrature algebra, cache round-trips, and sum consistency.

mod common;

use proptest::prelude::*;

use psa_core::functions::{builtin, Family, Params};
use psa_core::primes::{self, cache, PrimeEngine, SieveConfig};
use psa_core::quad;
use psa_core::sums;

fn unique_temp_dir(tag: &str) -> std::path::PathBuf {
    use std::sync::atomic::{AtomicU64, Ordering};
    static SEQ: AtomicU64 = AtomicU64::new(0);
    let dir = std::env::temp_dir().join(format!(
        "psa-prop-{}-{}-{}",
        std::process::id(),
        tag,
        SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Concatenating segments over any partition of [2, n) yields the primes
    /// of the whole range, independent of the partition boundaries.
    #[test]
    fn tiling_is_partition_independent(
        n in 100u64..20_000,
        cuts in prop::collection::vec(3u64..20_000, 0..5),
    ) {
        let engine = PrimeEngine::default();
        let mut bounds: Vec<u64> = cuts.into_iter().filter(|&c| c > 2 && c < n).collect();
        bounds.push(2);
        bounds.push(n);
        bounds.sort_unstable();
        bounds.dedup();

        let mut tiled = Vec::new();
        for w in bounds.windows(2) {
            tiled.extend(engine.sieve_range(w[0], w[1]).unwrap().iter_primes());
        }
        let whole: Vec<u64> = engine.sieve_range(2, n).unwrap().iter_primes().collect();
        prop_assert_eq!(&tiled, &whole);

        let naive = common::naive_sieve(n as usize - 1);
        let oracle: Vec<u64> = (2..n).filter(|&k| naive[k as usize]).collect();
        prop_assert_eq!(whole, oracle);
    }

    /// pi grows by 0 or 1 at each step, matching trial division.
    #[test]
    fn prime_count_is_monotone(n in 2u64..5_000) {
        let engine = PrimeEngine::default();
        let a = engine.prime_count(n).unwrap();
        let b = engine.prime_count(n + 1).unwrap();
        prop_assert!(b - a <= 1);
        prop_assert_eq!(b - a == 1, common::trial_is_prime(n + 1));
    }

    /// Splitting the interval splits the integral.
    #[test]
    fn quadrature_is_additive(
        a in 2.0f64..500.0,
        width in 1.0f64..1500.0,
        frac in 0.05f64..0.95,
    ) {
        let b = a + width;
        let c = a + width * frac;
        let g = |t: f64| t.ln().recip();
        let whole = quad::integrate(g, a, b, 1e-9).unwrap();
        let left = quad::integrate(g, a, c, 1e-9).unwrap();
        let right = quad::integrate(g, c, b, 1e-9).unwrap();
        let budget = 3.0 * (whole.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate)
            + 1e-12 * whole.value.abs();
        prop_assert!(
            (left.value + right.value - whole.value).abs() <= budget,
            "split {} + {} != {}", left.value, right.value, whole.value
        );
    }

    /// Scalar multiples come out of the integral.
    #[test]
    fn quadrature_is_linear(
        scale in prop::sample::select(vec![-7.5f64, -2.0, -0.125, 0.5, 3.0, 40.0]),
        b in 10.0f64..2000.0,
    ) {
        let g = |t: f64| t.ln().recip();
        let direct = quad::integrate(move |t| scale * g(t), 2.0, b, 1e-9).unwrap().value;
        let factored = scale * quad::integrate(g, 2.0, b, 1e-9).unwrap().value;
        prop_assert!((direct - factored).abs() <= 1e-7 * factored.abs().max(1e-12));
    }

    /// A monotone integrand keeps the mean value between its endpoint values.
    #[test]
    fn quadrature_respects_monotone_envelope(
        a in 2.0f64..1_000.0,
        width in 0.5f64..5_000.0,
    ) {
        let b = a + width;
        let g = |t: f64| t.ln().recip(); // decreasing on [2, inf)
        let v = quad::integrate(g, a, b, 1e-9).unwrap().value;
        let lo = width * g(b);
        let hi = width * g(a);
        prop_assert!(v >= lo - 1e-9 * hi && v <= hi + 1e-9 * hi, "{lo} <= {v} <= {hi}");
    }

    /// Cache round-trip reproduces segments bit for bit.
    #[test]
    fn cache_roundtrip_is_identity(lo in 2u64..50_000, width in 1u64..10_000) {
        let dir = unique_temp_dir("roundtrip");
        let seg = primes::sieve_range(lo, lo + width).unwrap();
        cache::write_segment(&dir, &seg).unwrap();
        let back = cache::read_segment(&dir, lo, lo + width).unwrap().unwrap();
        prop_assert_eq!(seg, back);
        std::fs::remove_dir_all(&dir).ok();
    }

    /// An engine with caching enabled answers exactly like one without.
    #[test]
    fn cached_engine_matches_uncached(n in 2u64..30_000) {
        let dir = unique_temp_dir("engine");
        let cached = PrimeEngine::new(SieveConfig {
            segment_odds: 1 << 10,
            cache_dir: Some(dir.clone()),
        });
        let plain = PrimeEngine::new(SieveConfig {
            segment_odds: 1 << 10,
            cache_dir: None,
        });
        // twice: second pass reads what the first wrote
        prop_assert_eq!(cached.prime_count(n).unwrap(), plain.prime_count(n).unwrap());
        let fresh = PrimeEngine::new(SieveConfig {
            segment_odds: 1 << 10,
            cache_dir: Some(dir.clone()),
        });
        prop_assert_eq!(fresh.prime_count(n).unwrap(), plain.prime_count(n).unwrap());
        std::fs::remove_dir_all(&dir).ok();
    }

    /// power(m = 0) coincides with the constant function.
    #[test]
    fn power_zero_is_one(t in 2.0f64..1e9) {
        let p0 = builtin::<f64>(Family::Power, Params::m(0.0)).unwrap();
        let one = builtin::<f64>(Family::One, Params::none()).unwrap();
        prop_assert_eq!(p0.eval(t), one.eval(t));
        prop_assert_eq!(p0.deriv(t), 0.0);
    }

    /// log_over_t equals the composition log(t) / t pointwise.
    #[test]
    fn log_over_t_is_the_composition(t in 2.0f64..1e12) {
        let f = builtin::<f64>(Family::LogOverT, Params::none()).unwrap();
        let composed = t.ln() / t;
        prop_assert!((f.eval(t) - composed).abs() <= 1e-15 * composed.abs());
    }

    /// Sum prefixes step by f(n) exactly at primes and not otherwise.
    #[test]
    fn exact_sum_prefix_consistency(n in 3u64..3_000) {
        let engine = PrimeEngine::default();
        let f = builtin::<f64>(Family::Power, Params::m(1.0)).unwrap();
        let cur = sums::exact_sum(&engine, &f, n).unwrap().value.linear();
        let prev = sums::exact_sum(&engine, &f, n - 1).unwrap().value.linear();
        if common::trial_is_prime(n) {
            prop_assert_eq!(cur - prev, n as f64);
        } else {
            prop_assert_eq!(cur, prev);
        }
    }

    /// The two summation routes agree for a non-trivial function.
    #[test]
    fn abel_equals_direct(n in 2u64..2_000) {
        let engine = PrimeEngine::default();
        let f = builtin::<f64>(Family::Log, Params::none()).unwrap();
        let direct = sums::exact_sum(&engine, &f, n).unwrap();
        let abel = sums::abel_sum(&engine, &f, n).unwrap();
        prop_assert!(sums::relative_gap(&abel, &direct) <= 1e-9);
    }

    /// Nonnegative functions give monotone sums.
    #[test]
    fn positive_sums_are_monotone(n in 3u64..2_000) {
        let engine = PrimeEngine::default();
        let f = builtin::<f64>(Family::Recip, Params::none()).unwrap();
        let cur = sums::exact_sum(&engine, &f, n).unwrap().value.linear();
        let prev = sums::exact_sum(&engine, &f, n - 1).unwrap().value.linear();
        prop_assert!(cur >= prev);
    }
}

/// Compensation stays negligible on a long integer-valued run.
#[test]
fn compensation_is_negligible_at_scale() {
    let engine = PrimeEngine::default();
    let one = builtin::<f64>(Family::One, Params::none()).unwrap();
    let s = sums::exact_sum(&engine, &one, 100_000_000).unwrap();
    assert_eq!(s.value.linear(), 5_761_455.0);
    assert!(s.compensation.abs() <= 1e-10 * s.value.linear());
}
