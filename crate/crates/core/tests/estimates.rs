use sfavg::estimator::{
    auto_estimate, convolution_estimate, coprime_power_estimate, critical_constants, critical_estimate, mu2_square_tail,
    squarefree_count_bound, squarefree_count_estimate, w_weight, Config, Domain, EstimateReport, Provenance,
};
use sfavg::function::FunctionSpec;
use sfavg::mainterm::Shape;
use sfavg::oracle::{bound_sweep, default_grid};
use sfavg::primefn::Q64;
use sfavg::primes::Sieve;
use sfavg::{presets, Interval};

fn cfg() -> Config {
    Config { prime_limit: 1_000_000, ..Config::default() }
}

fn sweep_ok(r: &EstimateReport, f: &FunctionSpec, q: u64, xmax: f64) {
    let grid = default_grid(xmax, r.domain == Domain::Positive);
    let out = bound_sweep(r, f, q, &grid).unwrap();
    let bad = out.failures();
    assert!(bad.is_empty(), "{} q={q} {:?}: first violation at X = {}", f.name, r.provenance, bad[0].x);
}

#[test]
fn theorems_agree_on_main_terms() {
    let f = presets::one_over_phi();
    for q in [1, 2, 3, 6] {
        let a = convolution_estimate(&f, q, &cfg()).unwrap();
        let b = critical_estimate(&f, q, &cfg()).unwrap();
        for shape in [Shape::LogX, Shape::Const] {
            let ca = a.main.coefficient(&shape).unwrap();
            let cb = b.main.coefficient(&shape).unwrap();
            assert!(ca.intersects(&cb), "q={q} {shape:?}: {ca:?} vs {cb:?}");
        }
    }
}

#[test]
fn even_modulus_main_term() {
    let r = critical_estimate(&presets::one_over_phi(), 2, &cfg()).unwrap();
    assert!(r.main.coefficient(&Shape::LogX).unwrap().contains(0.5));
    // ½𝔞_2 with 𝔞_2 ≈ 1.6791561.
    let c = r.main.coefficient(&Shape::Const).unwrap();
    assert!(c.intersects(&Interval::new(0.8395780, 0.8395781).unwrap()), "{c:?}");
    assert!((r.error_constant.mid() - 2.1681).abs() < 1e-3);
}

#[test]
fn w_reduces_to_e1_when_f2_is_half() {
    let k = critical_constants(cfg().prime_limit).unwrap();
    let w = w_weight(k.e1[0], k.e1[1], Interval::ZERO, 1).unwrap();
    assert!(w.intersects(&k.e1[0]));
    assert!((w.mid() - k.e1[0].mid()).abs() < 1e-9);
}

#[test]
fn squarefree_count_constants() {
    let h1 = squarefree_count_bound(1).unwrap();
    let h2 = squarefree_count_bound(2).unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((h1.mid() - 3f64.sqrt() * (1.0 - 6.0 / pi2)).abs() < 1e-12);
    assert!((h2.mid() - (1.0 - 4.0 / pi2)).abs() < 1e-12);
    // |Q(X) − 6X/π²| ≤ H_1 √X at every integer X ≤ 10^6.
    let w = Sieve::new(1_000_000).window(1, 1_000_001).unwrap();
    let mut count = 0u64;
    for n in 1..=1_000_000u64 {
        if w.is_squarefree(n) {
            count += 1;
        }
        let x = n as f64;
        assert!((count as f64 - 6.0 * x / pi2).abs() <= h1.hi() * x.sqrt(), "X = {n}");
    }
}

#[test]
fn convolution_constant_for_one_over_phi() {
    let r = convolution_estimate(&presets::one_over_phi(), 1, &cfg()).unwrap();
    assert_eq!(r.provenance, Provenance::Convolution);
    assert!((r.error_constant.mid() - 7.359848).abs() < 1e-5);
}

#[test]
fn auto_prefers_critical_route() {
    let f = presets::one_over_p_alpha(Q64::new(3, 2)).unwrap();
    let (r, fell_back) = auto_estimate(&f, 1, &cfg()).unwrap();
    assert!(!fell_back);
    assert_eq!(r.provenance, Provenance::CriticalAboveHalf);
}

#[test]
fn sweeps_for_fractional_exponents() {
    for (a, q) in [(Q64::new(3, 2), 1), (Q64::new(1, 2), 2), (Q64::new(1, 4), 3), (Q64::new(2, 1), 6)] {
        let f = presets::one_over_p_alpha(a).unwrap();
        let r = critical_estimate(&f, q, &cfg()).unwrap();
        sweep_ok(&r, &f, q, 3e4);
    }
}

#[test]
fn sweeps_for_power_and_square_tails() {
    for q in [1, 2, 15] {
        let f = presets::one_over_p_alpha(Q64::new(2, 1)).unwrap();
        let r = coprime_power_estimate(q, Interval::point(2.0), &cfg()).unwrap();
        sweep_ok(&r, &f, q, 3e4);
        let t = mu2_square_tail(q, &cfg()).unwrap();
        sweep_ok(&t, &f, q, 3e4);
    }
    for v in [1, 2] {
        let r = squarefree_count_estimate(v).unwrap();
        sweep_ok(&r, &presets::unit(), v, 3e4);
    }
}

#[test]
fn reports_serialize() {
    let r = critical_estimate(&presets::one_over_p(), 3, &cfg()).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: EstimateReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back.provenance, r.provenance);
    assert!(back.error_constant.hi() >= r.error_constant.hi());
}
