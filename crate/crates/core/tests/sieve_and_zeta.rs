use std::sync::OnceLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use proptest::prelude::*;

use sfavg::primes::{is_prime, is_squarefree, mobius, Sieve};
use sfavg::tailconst::{delta_constant, powersum_estimate, validate_delta_for_theorem};
use sfavg::zetapow::{zeta, zeta_rigorous};
use sfavg::Interval;

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn trial_squarefree(n: u64) -> bool {
    n >= 1 && (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0)
}

fn sieve() -> &'static Sieve {
    static S: OnceLock<Sieve> = OnceLock::new();
    S.get_or_init(|| Sieve::new(3_000_000))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn windows_match_trial_division(lo in 1u64..2_000_000, len in 1u64..3000) {
        let w = sieve().window(lo, lo + len).unwrap();
        for n in lo..lo + len {
            prop_assert_eq!(w.is_prime(n), trial_prime(n));
            prop_assert_eq!(w.is_squarefree(n), trial_squarefree(n));
        }
    }
}

#[test]
fn classical_counts() {
    let sieve = Sieve::new(1_000_000);
    let w = sieve.window(1, 1_000_001).unwrap();
    assert_eq!(w.primes().count(), 78_498);
    assert_eq!(w.squarefree().count(), 607_926);
    let mertens: i64 = (1..=10_000u64).map(|n| mobius(n) as i64).sum();
    assert_eq!(mertens, -23);
    assert!(is_prime(999_983) && !is_squarefree(999_999 * 9));
}

#[test]
fn zeta_values() {
    let z2 = zeta(Interval::point(2.0)).unwrap();
    assert!(z2.contains(std::f64::consts::PI.powi(2) / 6.0));
    assert!(zeta(Interval::point(3.0)).unwrap().contains(1.2020569031595942));
    let z32 = zeta_rigorous(Interval::ratio(3, 2), 1_000_000).unwrap().value;
    assert!(z32.contains(2.612375348685488));
    assert!(z32.width() < 1e-8);
}

fn harmonic(n: u64) -> BigRational {
    (1..=n).fold(BigRational::zero(), |s, k| s + BigRational::new(BigInt::one(), BigInt::from(k)))
}

#[test]
fn harmonic_estimate_against_exact_sums() {
    let third = Interval::ratio(1, 3);
    let (main, bound) = powersum_estimate(0.5, Interval::ONE, third).unwrap();
    assert!(main.abs().hi() <= bound.lo());
    assert!((bound.mid() - 1.147).abs() < 1e-3);
    let (main, bound) = powersum_estimate(1000.0, Interval::ONE, third).unwrap();
    let exact = Interval::from_ratio(&harmonic(1000));
    assert!((exact - main).abs().hi() <= bound.lo());
    assert!(bound.hi() <= 0.0911);
}

#[test]
fn inverse_square_estimate_against_exact_sum() {
    let two = Interval::point(2.0);
    // Exact Σ_{k≤10^4} 1/k² over the common denominator lcm(1..10^4)².
    let l = (1..=10_000u64).fold(BigInt::one(), |l, k| num::integer::lcm(l, BigInt::from(k)));
    let d = &l * &l;
    let n = (1..=10_000u64).fold(BigInt::zero(), |n, k| n + &d / BigInt::from(k * k));
    let s = BigRational::new(n, d);
    // δ = 1 sits on the excluded boundary δ > α − 1, so use δ = 6/5.
    let (main, bound) = powersum_estimate(1e4, two, Interval::ratio(6, 5)).unwrap();
    assert!((Interval::from_ratio(&s) - main).abs().hi() <= bound.lo());
}

#[test]
fn delta_constants() {
    let g = delta_constant(Interval::ONE, Interval::ONE).unwrap().value;
    assert!((g.mid() - 0.5772156649015329).abs() < 1e-12);
    let t = delta_constant(Interval::ONE, Interval::ratio(1, 3)).unwrap().value;
    assert!((t.mid() - 0.9105).abs() < 1e-4);
    let d = |x: f64| delta_constant(Interval::ONE, Interval::point(x)).unwrap().value;
    assert!(d(0.01).lo() > d(0.1).hi() && d(0.1).lo() > t.hi());
    assert_eq!(delta_constant(two(), two()).unwrap().value, Interval::ONE);
}

fn two() -> Interval {
    Interval::point(2.0)
}

#[test]
fn theorem_delta_window() {
    let third = Interval::ratio(1, 3);
    assert!(validate_delta_for_theorem(Interval::ONE, two(), third).unwrap());
    assert!(!validate_delta_for_theorem(two(), Interval::point(4.0), Interval::point(0.9)).unwrap());
}
