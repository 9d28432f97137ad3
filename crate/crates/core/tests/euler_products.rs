use std::sync::Arc;

use sfavg::eulerprod::{
    h_at, mathfrak_a, mathfrak_b, ramare_product, ramare_schedule, sum_2log_p_over_p2minus1, sum_log_p_over_p_pminus1,
    t_f_q, Acceleration, HVariant,
};
use sfavg::function::FunctionSpec;
use sfavg::primefn::{PrimeCtx, Q64};
use sfavg::primes::small_primes;
use sfavg::{presets, Interval};

#[test]
fn limits_agree() {
    for g in [sum_log_p_over_p_pminus1, sum_2log_p_over_p2minus1] {
        let a = g(100_000).unwrap();
        let b = g(1_000_000).unwrap();
        assert!(a.intersects(&b));
        assert!(b.width() < a.width());
    }
}

#[test]
fn main_term_constants() {
    let a1 = mathfrak_a(1, 1_000_000).unwrap();
    assert!(a1.intersects(&Interval::new(1.33258225, 1.33258235).unwrap()), "{a1:?}");
    let a2 = mathfrak_a(2, 1_000_000).unwrap();
    assert!((a2 - a1 - Interval::ln2() / 2.0).contains_zero());
    let b1 = mathfrak_b(1, 1_000_000).unwrap();
    assert!((b1.mid() - 1.71714).abs() < 1e-4);
}

#[test]
fn t_drops_the_prime_two() {
    let f = presets::one_over_p();
    let t1 = t_f_q(&f, 1, 1_000_000).unwrap();
    let t2 = t_f_q(&f, 2, 1_000_000).unwrap();
    // For f(p) = 1/p the p = 2 term is log 2/(3/2).
    assert!((t1 - t2 - Interval::ln2() * Interval::ratio(2, 3)).contains_zero());
    assert!(t1.intersects(&sum_2log_p_over_p2minus1(1_000_000).unwrap()));
}

#[test]
fn ramare_peeling_is_consistent() {
    let plain = ramare_product(1_000_000, &Acceleration::None).unwrap();
    let fixed = ramare_product(1_000_000, &ramare_schedule()).unwrap();
    let auto = ramare_product(1_000_000, &Acceleration::default_auto()).unwrap();
    assert!(plain.intersects(&fixed) && fixed.intersects(&auto));
    assert!(fixed.width() < 1e-5);
    // The finite product only grows, so it never exceeds the certified value.
    let partial: f64 = small_primes(1_000_000)
        .iter()
        .map(|&p| {
            let p = p as f64;
            1.0 + 1.0 / ((p - 1.0) * (p.sqrt() - 1.0))
        })
        .product();
    assert!(partial <= fixed.hi() * (1.0 + 1e-12));
}

#[test]
fn evaluator_path_matches_exact_path() {
    let exact = presets::one_over_phi();
    let custom = FunctionSpec::custom(
        "phi-evaluator",
        exact.alpha,
        exact.beta,
        Arc::new(|ctx: &PrimeCtx| (ctx.pi - Interval::ONE).recip().expect("p > 1")),
        exact.decay,
    );
    for q in [1, 6] {
        for (s, v) in [(Q64::from_integer(0), HVariant::Signed), (Q64::new(-1, 3), HVariant::Absolute)] {
            let a = h_at(&exact, q, s, v, 1_000_000, &Acceleration::default_auto()).unwrap();
            let b = h_at(&custom, q, s, v, 1_000_000, &Acceleration::None).unwrap();
            assert!(a.intersects(&b), "q={q} s={s}: {a:?} vs {b:?}");
        }
    }
}
