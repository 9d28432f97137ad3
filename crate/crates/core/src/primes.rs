//! Segmented sieve with prime and squarefree flags, and small multiplicative
//! helpers over trial-division factorizations.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_SEGMENT: u64 = 1 << 22;
pub const DEFAULT_LIMIT: u64 = 10_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize, value: bool) -> BitSet {
        let fill = if value { u64::MAX } else { 0 };
        let mut words = vec![fill; len.div_ceil(64)];
        if value && len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (len % 64)) - 1;
            }
        }
        BitSet { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1u64 << (i & 63);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

/// Flags for the integers in `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveWindow {
    pub lo: u64,
    pub hi: u64,
    pub prime_flags: BitSet,
    pub squarefree_flags: BitSet,
}

impl SieveWindow {
    pub fn is_prime(&self, n: u64) -> bool {
        self.prime_flags.get((n - self.lo) as usize)
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.squarefree_flags.get((n - self.lo) as usize)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.prime_flags.iter_ones().map(move |i| self.lo + i as u64)
    }

    pub fn squarefree(&self) -> impl Iterator<Item = u64> + '_ {
        self.squarefree_flags.iter_ones().map(move |i| self.lo + i as u64)
    }
}

/// Primes up to `n` by a plain sieve of Eratosthenes.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// A segmented sieve able to produce windows below a fixed limit.
#[derive(Clone, Debug)]
pub struct Sieve {
    limit: u64,
    segment: u64,
    base: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Sieve {
        Sieve::with_segment(limit, DEFAULT_SEGMENT)
    }

    pub fn with_segment(limit: u64, segment: u64) -> Sieve {
        assert!(segment > 0);
        Sieve { limit, segment, base: small_primes(isqrt(limit) + 1) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment(&self) -> u64 {
        self.segment
    }

    pub fn window(&self, lo: u64, hi: u64) -> Result<SieveWindow> {
        if hi <= lo {
            return Err(Error::DomainError(format!("empty window [{lo}, {hi})")));
        }
        if hi > self.limit.saturating_add(1) {
            return Err(Error::LimitExceeded(format!("window end {hi} above sieve limit {}", self.limit)));
        }
        let len = (hi - lo) as usize;
        let mut prime = BitSet::new(len, true);
        let mut sqfree = BitSet::new(len, true);
        for n in lo..hi.min(2) {
            prime.clear((n - lo) as usize);
        }
        if lo == 0 {
            sqfree.clear(0);
        }
        for &p in &self.base {
            let pp = p * p;
            if pp >= hi {
                break;
            }
            let start = pp.max(lo.div_ceil(p) * p);
            let mut m = start;
            while m < hi {
                prime.clear((m - lo) as usize);
                m += p;
            }
            let mut m = lo.div_ceil(pp) * pp;
            if m == 0 {
                m = pp;
            }
            while m < hi {
                sqfree.clear((m - lo) as usize);
                m += pp;
            }
        }
        Ok(SieveWindow { lo, hi, prime_flags: prime, squarefree_flags: sqfree })
    }

    /// Segment boundaries covering `[lo, hi)`.
    pub fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut a = lo;
        while a < hi {
            let b = (a + self.segment).min(hi);
            out.push((a, b));
            a = b;
        }
        out
    }

    /// Applies `f` to each segment's window in parallel and returns the
    /// results in ascending segment order.
    pub fn map_windows<T, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&SieveWindow) -> Result<T> + Sync,
    {
        self.segments(lo, hi)
            .into_par_iter()
            .map(|(a, b)| self.window(a, b).and_then(|w| f(&w)))
            .collect()
    }

    /// Applies `f` to the primes of each segment, in parallel, keeping order.
    pub fn map_prime_chunks<T, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[u64]) -> Result<T> + Sync,
    {
        self.map_windows(lo, hi, |w| {
            let ps: Vec<u64> = w.primes().collect();
            f(&ps)
        })
    }
}

fn default_sieve() -> &'static Sieve {
    static S: OnceLock<Sieve> = OnceLock::new();
    S.get_or_init(|| Sieve::new(DEFAULT_LIMIT))
}

/// Sieves `[lo, hi)` with the default global limit.
pub fn sieve_window(lo: u64, hi: u64) -> Result<SieveWindow> {
    default_sieve().window(lo, hi)
}

/// Prime factorization as strictly increasing `(prime, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    pub fn big_omega(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize(0)");
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if !f.is_squarefree() {
        0
    } else if f.0.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn liouville(n: u64) -> i32 {
    if factorize(n).big_omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).is_squarefree()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).0 == vec![(n, 1)]
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

/// Generalized totient `q^s Π_{p|q}(1 − p^{−s})`.
pub fn phi_s(q: u64, s: Interval) -> Result<Interval> {
    euler_like(q, s, -1)
}

/// Companion `q^s Π_{p|q}(1 + p^{−s})`.
pub fn kappa_s(q: u64, s: Interval) -> Result<Interval> {
    euler_like(q, s, 1)
}

fn euler_like(q: u64, s: Interval, sign: i32) -> Result<Interval> {
    if q == 0 {
        return Err(Error::DomainError("modulus must be positive".into()));
    }
    if q == 1 {
        return Ok(Interval::ONE);
    }
    let f = factorize(q);
    let mut acc = Interval::from_u64(q).pow(s)?;
    for p in f.primes() {
        let ps = Interval::from_u64(p).pow(-s)?;
        acc = acc * if sign < 0 { Interval::ONE - ps } else { Interval::ONE + ps };
    }
    Ok(acc)
}

/// Euler's totient.
pub fn phi(q: u64) -> u64 {
    let f = factorize(q);
    f.0.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

/// `q Π_{p|q}(1 + 1/p)`.
pub fn kappa(q: u64) -> u64 {
    let f = factorize(q);
    f.0.iter().map(|&(p, e)| (p + 1) * p.pow(e - 1)).product()
}

/// Smallest prime factor table for `0..=n` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window() {
        let w = sieve_window(2, 30).unwrap();
        let ps: Vec<u64> = w.primes().collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let w = sieve_window(1, 101).unwrap();
        assert_eq!(w.squarefree_flags.count_ones(), 61);
        let w = sieve_window(49, 50).unwrap();
        assert!(!w.is_prime(49) && !w.is_squarefree(49));
    }

    #[test]
    fn limit_is_enforced() {
        let s = Sieve::new(1000);
        assert!(matches!(s.window(0, 2000), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn totients() {
        assert_eq!(phi_s(1, Interval::point(0.5)).unwrap(), Interval::ONE);
        assert_eq!(kappa_s(2, Interval::ONE).unwrap(), Interval::point(3.0));
        assert!(phi_s(2, Interval::point(0.5)).unwrap().contains(2f64.sqrt() - 1.0));
        assert_eq!(phi(12), 4);
        assert_eq!(kappa(6), 12);
    }

    #[test]
    fn liouville_values() {
        assert_eq!(liouville(1), 1);
        assert_eq!(liouville(8), -1);
        assert_eq!(liouville(12), -1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }
}
