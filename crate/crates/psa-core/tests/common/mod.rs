//! Independent oracles shared by the integration suites. These deliberately
//! avoid the library's own sieve/quadrature paths.
#![allow(dead_code)]

/// Naive full-array sieve: `is_prime[k]` for `k <= n`.
pub fn naive_sieve(n: usize) -> Vec<bool> {
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    if n >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2usize;
    while i * i <= n {
        if is_prime[i] {
            let mut j = i * i;
            while j <= n {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_prime
}

/// Trial-division primality.
pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Fixed-step composite Simpson with compensated accumulation.
pub fn simpson_oracle(g: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let n = if steps.is_multiple_of(2) { steps } else { steps + 1 };
    let h = (b - a) / n as f64;
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |x: f64| {
        let y = x - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    };
    add(g(a));
    add(g(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        add(w * g(a + i as f64 * h));
    }
    acc * h / 3.0
}
