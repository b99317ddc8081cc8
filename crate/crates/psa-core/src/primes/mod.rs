//! Segmented sieve of Eratosthenes with bit-packed odd-only storage.
//!
//! A [`SieveSegment`] holds one bit per odd integer in a half-open range
//! `[lo, hi)`; 2 is handled by the range bounds rather than a bit. Large
//! queries are answered by tiling a canonical segment grid (boundaries at
//! multiples of the segment span), so repeated counts reuse per-boundary
//! checkpoints of the prime-counting function and, when `PSA_CACHE_DIR` is
//! configured, on-disk copies of the sieved bitsets.
//!
//! Memory stays bounded by a single segment regardless of the query limit;
//! the default segment holds 2^20 odd entries (span 2^21), balancing cache
//! locality against recomputation of base primes.

pub mod cache;

use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// Declared upper limit for sieving. Practical desk scale is ~10^9.
pub const MAX_LIMIT: u64 = 1 << 40;

/// Environment variable naming the segment cache directory.
pub const CACHE_DIR_ENV: &str = "PSA_CACHE_DIR";

const DEFAULT_SEGMENT_ODDS: u64 = 1 << 20;

/// Sieve tuning knobs.
#[derive(Clone, Debug)]
pub struct SieveConfig {
    /// Odd entries per segment (span is twice this).
    pub segment_odds: u64,
    /// Directory for cached segment bitsets; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_odds: DEFAULT_SEGMENT_ODDS,
            cache_dir: None,
        }
    }
}

impl SieveConfig {
    /// Default config with the cache directory taken from `PSA_CACHE_DIR`.
    pub fn from_env() -> Self {
        Self {
            cache_dir: std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from),
            ..Self::default()
        }
    }
}

/// Bit-packed primality data over `[lo, hi)`.
///
/// Bit `i` corresponds to the odd integer `first_odd + 2*i` and is set iff
/// that integer is prime. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveSegment {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl SieveSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Smallest odd integer >= lo.
    pub fn first_odd(&self) -> u64 {
        self.lo | 1
    }

    /// Number of odd integers in `[lo, hi)`.
    pub fn odd_count(&self) -> u64 {
        odd_count(self.lo, self.hi)
    }

    pub(crate) fn from_parts(lo: u64, hi: u64, mut words: Vec<u64>) -> Self {
        let bits = odd_count(lo, hi);
        words.resize(bits.div_ceil(64) as usize, 0);
        clear_tail(&mut words, bits);
        Self { lo, hi, words }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn into_words(self) -> Vec<u64> {
        self.words
    }

    #[inline]
    fn bit(&self, idx: u64) -> bool {
        self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    /// Primality of `k`, or `None` when `k` is outside `[lo, hi)`.
    pub fn is_prime(&self, k: u64) -> Option<bool> {
        if k < self.lo || k >= self.hi {
            return None;
        }
        Some(if k == 2 {
            true
        } else if k.is_multiple_of(2) {
            false
        } else {
            self.bit((k - self.first_odd()) / 2)
        })
    }

    /// Primes in `[lo, hi)` in increasing order.
    pub fn iter_primes(&self) -> SegmentPrimes<'_> {
        SegmentPrimes {
            seg: self,
            two_pending: self.lo <= 2 && 2 < self.hi,
            word_idx: 0,
            word: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Number of primes in `[lo, hi)`.
    pub fn count_primes(&self) -> u64 {
        let two = u64::from(self.lo <= 2 && 2 < self.hi);
        two + self.words.iter().map(|w| u64::from(w.count_ones())).sum::<u64>()
    }

    /// Number of primes `p` with `lo <= p <= n`.
    pub fn count_primes_upto(&self, n: u64) -> u64 {
        if n < self.lo {
            return 0;
        }
        if n >= self.hi - 1 {
            return self.count_primes();
        }
        let two = u64::from(self.lo <= 2 && 2 <= n);
        let first = self.first_odd();
        if n < first {
            return two;
        }
        let bits = (n - first) / 2 + 1;
        let full = (bits / 64) as usize;
        let mut count: u64 = self.words[..full].iter().map(|w| u64::from(w.count_ones())).sum();
        let rem = bits % 64;
        if rem != 0 {
            let mask = (1u64 << rem) - 1;
            count += u64::from((self.words[full] & mask).count_ones());
        }
        two + count
    }
}

/// Iterator over the primes stored in a segment.
pub struct SegmentPrimes<'a> {
    seg: &'a SieveSegment,
    two_pending: bool,
    word_idx: usize,
    word: u64,
}

impl Iterator for SegmentPrimes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.two_pending {
            self.two_pending = false;
            return Some(2);
        }
        loop {
            if self.word != 0 {
                let tz = self.word.trailing_zeros() as u64;
                self.word &= self.word - 1;
                let idx = 64 * self.word_idx as u64 + tz;
                return Some(self.seg.first_odd() + 2 * idx);
            }
            self.word_idx += 1;
            self.word = *self.seg.words.get(self.word_idx)?;
        }
    }
}

/// A prime-counting checkpoint: `count` = pi(`n`).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PiCheckpoint {
    pub n: u64,
    pub count: u64,
}

/// Segmented sieve engine with checkpointed counting and optional caching.
///
/// Internal state is interior-mutable; queries take `&self` and distinct
/// queries may run concurrently.
pub struct PrimeEngine {
    config: SieveConfig,
    base: Mutex<BaseCache>,
    checkpoints: Mutex<Vec<PiCheckpoint>>,
}

struct BaseCache {
    limit: u64,
    primes: Arc<Vec<u64>>,
}

impl Default for PrimeEngine {
    fn default() -> Self {
        Self::new(SieveConfig::default())
    }
}

impl PrimeEngine {
    pub fn new(config: SieveConfig) -> Self {
        Self {
            config,
            base: Mutex::new(BaseCache {
                limit: 0,
                primes: Arc::new(Vec::new()),
            }),
            checkpoints: Mutex::new(Vec::new()),
        }
    }

    /// Engine configured from `PSA_CACHE_DIR`.
    pub fn from_env() -> Self {
        Self::new(SieveConfig::from_env())
    }

    pub fn config(&self) -> &SieveConfig {
        &self.config
    }

    /// Odd base primes up to `limit` (shared, grown on demand).
    fn base_primes(&self, limit: u64) -> Arc<Vec<u64>> {
        let mut cache = self.base.lock().expect("base prime lock");
        if cache.limit < limit {
            // Grow with headroom so repeated slightly-larger queries reuse it.
            let target = limit.max(1 << 10).max(cache.limit * 2);
            cache.primes = Arc::new(simple_odd_primes(target));
            cache.limit = target;
        }
        Arc::clone(&cache.primes)
    }

    /// Sieve the exact range `[lo, hi)` as a single segment.
    pub fn sieve_range(&self, lo: u64, hi: u64) -> Result<SieveSegment> {
        if lo < 2 || lo >= hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        if hi > MAX_LIMIT {
            return Err(Error::LimitTooLarge { n: hi, max: MAX_LIMIT });
        }
        let odds = odd_count(lo, hi);
        if odds > self.config.segment_odds {
            return Err(Error::RangeTooLarge {
                lo,
                hi,
                odds,
                budget: self.config.segment_odds,
            });
        }
        Ok(self.segment(lo, hi))
    }

    /// Sieve `[lo, hi)` (already validated), consulting the cache if any.
    fn segment(&self, lo: u64, hi: u64) -> SieveSegment {
        if let Some(dir) = &self.config.cache_dir {
            // Any cache problem falls back to sieving.
            if let Ok(Some(seg)) = cache::read_segment(dir, lo, hi) {
                return seg;
            }
        }
        let root = isqrt(hi - 1);
        let base = self.base_primes(root);
        let seg = sieve_segment(lo, hi, &base);
        if let Some(dir) = &self.config.cache_dir {
            let _ = cache::write_segment(dir, &seg);
        }
        seg
    }

    fn span(&self) -> u64 {
        2 * self.config.segment_odds
    }

    /// Canonical segment bounds containing `x`.
    fn canonical_bounds(&self, x: u64) -> (u64, u64) {
        let span = self.span();
        let i = x / span;
        let lo = (i * span).max(2);
        let hi = ((i + 1) * span).min(MAX_LIMIT);
        (lo, hi)
    }

    fn validate_limit(&self, n: u64) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidRange { lo: 2, hi: n });
        }
        if n >= MAX_LIMIT {
            return Err(Error::LimitTooLarge { n, max: MAX_LIMIT - 1 });
        }
        Ok(())
    }

    /// Exact pi(n), reusing per-boundary checkpoints across calls.
    pub fn prime_count(&self, n: u64) -> Result<u64> {
        self.validate_limit(n)?;
        let (mut count, mut from) = {
            let cps = self.checkpoints.lock().expect("checkpoint lock");
            match cps.iter().rev().find(|cp| cp.n <= n) {
                Some(cp) => (cp.count, cp.n + 1),
                None => (0, 2),
            }
        };
        while from <= n {
            let (lo, hi) = self.canonical_bounds(from);
            let seg = self.segment(lo, hi);
            if hi - 1 <= n {
                count += seg.count_primes();
                self.record_checkpoint(PiCheckpoint { n: hi - 1, count });
                from = hi;
            } else {
                count += seg.count_primes_upto(n);
                break;
            }
        }
        Ok(count)
    }

    fn record_checkpoint(&self, cp: PiCheckpoint) {
        let mut cps = self.checkpoints.lock().expect("checkpoint lock");
        match cps.binary_search_by_key(&cp.n, |c| c.n) {
            Ok(_) => {}
            Err(pos) => cps.insert(pos, cp),
        }
    }

    /// Snapshot of recorded checkpoints (ascending in `n`).
    pub fn checkpoints(&self) -> Vec<PiCheckpoint> {
        self.checkpoints.lock().expect("checkpoint lock").clone()
    }

    /// Pull-based iterator over primes `<= n`; holds one segment at a time.
    pub fn primes_upto(&self, n: u64) -> Result<PrimeIter<'_>> {
        self.validate_limit(n)?;
        Ok(PrimeIter {
            engine: self,
            limit: n,
            next_lo: 2,
            two_pending: true,
            seg_first: 0,
            words: Vec::new(),
            word_idx: 0,
            done: false,
        })
    }

    /// Invoke `visitor` once per prime `p <= n`, in increasing order.
    pub fn stream_primes<F>(&self, n: u64, mut visitor: F) -> Result<()>
    where
        F: FnMut(u64),
    {
        for p in self.primes_upto(n)? {
            visitor(p);
        }
        Ok(())
    }

    /// Fallible-visitor variant; aborts cleanly on the first visitor error.
    pub fn try_stream_primes<F, E>(&self, n: u64, mut visitor: F) -> Result<std::result::Result<(), E>>
    where
        F: FnMut(u64) -> std::result::Result<(), E>,
    {
        for p in self.primes_upto(n)? {
            if let Err(e) = visitor(p) {
                return Ok(Err(e));
            }
        }
        Ok(Ok(()))
    }
}

/// Streaming iterator over primes up to an inclusive limit.
pub struct PrimeIter<'a> {
    engine: &'a PrimeEngine,
    limit: u64,
    next_lo: u64,
    two_pending: bool,
    seg_first: u64,
    words: Vec<u64>,
    word_idx: usize,
    done: bool,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        if self.two_pending {
            self.two_pending = false;
            return Some(2);
        }
        loop {
            while self.word_idx < self.words.len() {
                let w = &mut self.words[self.word_idx];
                if *w == 0 {
                    self.word_idx += 1;
                    continue;
                }
                let tz = w.trailing_zeros() as u64;
                *w &= *w - 1;
                let idx = 64 * self.word_idx as u64 + tz;
                let p = self.seg_first + 2 * idx;
                if p > self.limit {
                    self.done = true;
                    return None;
                }
                return Some(p);
            }
            if self.next_lo > self.limit {
                self.done = true;
                return None;
            }
            let (lo, hi) = self.engine.canonical_bounds(self.next_lo);
            let seg = self.engine.segment(lo, hi);
            self.seg_first = seg.first_odd();
            self.words = seg.into_words();
            self.word_idx = 0;
            self.next_lo = hi;
        }
    }
}

/// Sieve `[lo, hi)` with a default engine.
pub fn sieve_range(lo: u64, hi: u64) -> Result<SieveSegment> {
    PrimeEngine::default().sieve_range(lo, hi)
}

/// Exact pi(n) with a default engine.
pub fn prime_count(n: u64) -> Result<u64> {
    PrimeEngine::default().prime_count(n)
}

/// Stream primes `<= n` with a default engine.
pub fn stream_primes<F: FnMut(u64)>(n: u64, visitor: F) -> Result<()> {
    PrimeEngine::default().stream_primes(n, visitor)
}

/// Trial-division primality test (used for grid validation, not bulk work).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 7u64;
    let mut step = [4u64, 2].into_iter().cycle();
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += step.next().unwrap();
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> Result<u64> {
    let mut k = n.max(2);
    loop {
        if k >= MAX_LIMIT {
            return Err(Error::LimitTooLarge { n: k, max: MAX_LIMIT - 1 });
        }
        if is_prime(k) {
            return Ok(k);
        }
        k += 1;
    }
}

fn odd_count(lo: u64, hi: u64) -> u64 {
    let first = lo | 1;
    if first >= hi {
        0
    } else {
        (hi - first).div_ceil(2)
    }
}

fn clear_tail(words: &mut [u64], bits: u64) {
    let rem = bits % 64;
    if rem != 0 {
        if let Some(w) = words.last_mut() {
            *w &= (1u64 << rem) - 1;
        }
    }
}

fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// Monolithic odd-only sieve for base primes (limit stays near sqrt(2^40)).
fn simple_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n / 2 + 1]; // index i <-> 2i + 1
    let mut primes = Vec::new();
    let mut p = 3u64;
    while p <= limit {
        if !composite[(p / 2) as usize] {
            primes.push(p);
            let mut m = p * p;
            while m <= limit {
                composite[(m / 2) as usize] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    primes
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> SieveSegment {
    let bits = odd_count(lo, hi);
    let mut words = vec![!0u64; bits.div_ceil(64) as usize];
    clear_tail(&mut words, bits);
    if bits > 0 {
        let first = lo | 1;
        for &p in base {
            let p2 = p * p;
            if p2 >= hi {
                break;
            }
            let mut m = if p2 > lo { p2 } else { lo.div_ceil(p) * p };
            if m % 2 == 0 {
                m += p;
            }
            while m < hi {
                let idx = (m - first) / 2;
                words[(idx / 64) as usize] &= !(1u64 << (idx % 64));
                m += 2 * p;
            }
        }
    }
    SieveSegment { lo, hi, words }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_primes(lo: u64, hi: u64) -> Vec<u64> {
        (lo..hi).filter(|&k| is_prime(k)).collect()
    }

    #[test]
    fn small_range_matches_trial_division() {
        let seg = sieve_range(2, 12).unwrap();
        let primes: Vec<u64> = seg.iter_primes().collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11]);
        assert_eq!(primes, trial_primes(2, 12));
    }

    #[test]
    fn singleton_composite_range_is_empty() {
        let seg = sieve_range(14, 15).unwrap();
        assert_eq!(seg.count_primes(), 0);
        assert_eq!(seg.iter_primes().count(), 0);
    }

    #[test]
    fn arbitrary_ranges_match_trial_division() {
        for &(lo, hi) in &[(2, 3), (2, 100), (97, 98), (1000, 1100), (9973, 9975), (2, 541)] {
            let seg = sieve_range(lo, hi).unwrap();
            let got: Vec<u64> = seg.iter_primes().collect();
            assert_eq!(got, trial_primes(lo, hi), "range [{lo}, {hi})");
            assert_eq!(seg.count_primes(), got.len() as u64);
        }
    }

    #[test]
    fn is_prime_queries() {
        let seg = sieve_range(2, 30).unwrap();
        assert_eq!(seg.is_prime(2), Some(true));
        assert_eq!(seg.is_prime(9), Some(false));
        assert_eq!(seg.is_prime(29), Some(true));
        assert_eq!(seg.is_prime(30), None);
        assert_eq!(seg.is_prime(1), None);
    }

    #[test]
    fn range_validation() {
        assert!(matches!(sieve_range(5, 5), Err(Error::InvalidRange { .. })));
        assert!(matches!(sieve_range(1, 10), Err(Error::InvalidRange { .. })));
        assert!(matches!(
            sieve_range(2, MAX_LIMIT + 2),
            Err(Error::LimitTooLarge { .. })
        ));
        let engine = PrimeEngine::new(SieveConfig {
            segment_odds: 8,
            ..SieveConfig::default()
        });
        assert!(matches!(
            engine.sieve_range(2, 100),
            Err(Error::RangeTooLarge { .. })
        ));
        assert!(engine.sieve_range(2, 18).is_ok());
    }

    #[test]
    fn prime_count_small_values() {
        assert_eq!(prime_count(2).unwrap(), 1);
        assert_eq!(prime_count(10).unwrap(), 4);
        assert_eq!(prime_count(100).unwrap(), 25);
        assert_eq!(prime_count(541).unwrap(), 100);
    }

    #[test]
    fn prime_count_monotone_steps() {
        let engine = PrimeEngine::default();
        let mut prev = engine.prime_count(2).unwrap();
        for n in 3..500 {
            let cur = engine.prime_count(n).unwrap();
            let step = cur - prev;
            assert!(step == u64::from(is_prime(n)), "n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn checkpoints_accumulate_and_shortcut() {
        let engine = PrimeEngine::new(SieveConfig {
            segment_odds: 64, // span 128: forces several boundaries
            ..SieveConfig::default()
        });
        assert_eq!(engine.prime_count(1000).unwrap(), 168);
        let cps = engine.checkpoints();
        assert!(!cps.is_empty());
        for w in cps.windows(2) {
            assert!(w[0].n < w[1].n);
            assert!(w[0].count <= w[1].count);
        }
        for cp in &cps {
            assert!(cp.count <= cp.n / 2 + 1);
        }
        // second query resumes from a checkpoint and agrees
        assert_eq!(engine.prime_count(1500).unwrap(), 239);
    }

    #[test]
    fn streaming_is_ordered_and_bounded() {
        let engine = PrimeEngine::new(SieveConfig {
            segment_odds: 32,
            ..SieveConfig::default()
        });
        let mut seen = Vec::new();
        engine.stream_primes(1000, |p| seen.push(p)).unwrap();
        assert_eq!(seen.len(), 168);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(seen, trial_primes(2, 1001));
    }

    #[test]
    fn try_stream_aborts_on_visitor_error() {
        let engine = PrimeEngine::default();
        let mut seen = Vec::new();
        let out = engine
            .try_stream_primes(100, |p| {
                if p > 13 {
                    return Err("stop");
                }
                seen.push(p);
                Ok(())
            })
            .unwrap();
        assert_eq!(out, Err("stop"));
        assert_eq!(seen, vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn next_prime_and_is_prime() {
        assert!(is_prime(2) && is_prime(3) && is_prime(999983));
        assert!(!is_prime(1) && !is_prime(999981));
        assert_eq!(next_prime(1000).unwrap(), 1009);
        assert_eq!(next_prime(10_000_000).unwrap(), 10_000_019);
        assert_eq!(next_prime(13).unwrap(), 13);
    }
}
