use sfavg::error::Error;
use sfavg::estimator::{critical_estimate, Config};
use sfavg::eulerprod::mathfrak_b;
use sfavg::oracle::{bound_sweep, default_grid, direct_average, empirical_sup, Average};
use sfavg::supsearch::{empty_range_sup_log, grid_sup, verified_sup_with};
use sfavg::{presets, Interval};

#[test]
fn verified_sup_dominates_grid_values() {
    for v in [1, 2] {
        let bv = mathfrak_b(v, 1_000_000).unwrap();
        let s = verified_sup_with(v, 2000, bv).unwrap();
        let grid: Vec<f64> = (1..=2000).flat_map(|n| [n as f64, n as f64 - 1e-9]).filter(|&x| x >= 1.0).collect();
        let g = grid_sup(v, bv.mid(), &grid);
        assert!(g <= s.bound.hi() + 1e-9, "v={v}: grid {g} above {:?}", s.bound);
        // The certified lower end loses about √X·width(𝔟_v).
        assert!(s.bound.lo() >= g - 50.0 * bv.width() - 1e-9);
    }
}

#[test]
fn empty_range_for_v1() {
    let b1 = mathfrak_b(1, 1_000_000).unwrap();
    let e = empty_range_sup_log(1, b1).unwrap();
    assert!((e.mid() - 1.0439).abs() < 1e-3);
}

#[test]
fn direct_averages() {
    let a = direct_average(&presets::one_over_p(), 2, 10.0).unwrap();
    assert!(a.interval().contains(176.0 / 105.0));
    assert!(matches!(a, Average::Exact(_)));
    assert_eq!(direct_average(&presets::unit(), 1, 100.0).unwrap().interval(), Interval::point(61.0));
    assert!(matches!(direct_average(&presets::unit(), 1, 2e8), Err(Error::LimitExceeded(_))));
    // Beyond the exact cutoff the walk falls back to intervals.
    let big = direct_average(&presets::unit(), 1, 1e6).unwrap();
    assert_eq!(big.interval(), Interval::point(607_926.0));
}

#[test]
fn sweep_csv_layout() {
    let cfg = Config { prime_limit: 1_000_000, ..Config::default() };
    let f = presets::one_over_phi();
    let r = critical_estimate(&f, 2, &cfg).unwrap();
    let out = bound_sweep(&r, &f, 2, &[100.0, 0.5, 3.0 - 1e-6, 3.0]).unwrap();
    assert!(out.passed());
    let csv = out.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "X,partial_sum,main,residual,bound,margin");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0.5,"));
    assert!(lines[4].starts_with("100,"));
}

#[test]
fn default_grid_shape() {
    let g = default_grid(1e6, true);
    assert!(g.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(g.iter().filter(|&&x| x < 1.0 - 1e-5).count(), 50);
    assert!(g.contains(&3.0) && g.contains(&(3.0 - 1.0 / 1_048_576.0)));
    assert!(!g.contains(&4.0));
    assert_eq!(*g.last().unwrap(), 1e6);
    assert!(default_grid(1e6, false).iter().all(|&x| x >= 1.0));
}

#[test]
fn empirical_sup_on_the_empty_range() {
    let cfg = Config { prime_limit: 1_000_000, ..Config::default() };
    let f = presets::one_over_p();
    let r = critical_estimate(&f, 1, &cfg).unwrap();
    let e = empirical_sup(&f, 1, &r.main, 0.5, 0.0, 1.0).unwrap();
    // √X·(6/π²)|log X + 𝔟_1| is largest as X → 1⁻, where it tends to 6𝔟_1/π².
    assert!((e - 1.0439).abs() < 2e-3, "{e}");
    assert!(e <= r.error_constant.hi());
}
