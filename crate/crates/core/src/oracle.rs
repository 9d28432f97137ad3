//! Brute-force partial sums `Σ_{ℓ≤X,(ℓ,q)=1} μ²(ℓ)f(ℓ)` and pointwise checks
//! of estimate reports against them.

use std::fmt::Write as _;

use num::rational::BigRational;
use num::bigint::BigInt;
use num::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::EstimateReport;
use crate::function::FunctionSpec;
use crate::interval::{decimal_bound, fraction_enclosure, Direction, Interval};
use crate::mainterm::MainTermDescriptor;
use crate::primefn::PrimeCtx;
use crate::primes::{factorize, gcd, isqrt, small_primes};

/// Exact rational sums are used up to this `X`.
pub const EXACT_CUTOFF: u64 = 10_000;
pub const DIRECT_LIMIT: u64 = 100_000_000;
const WINDOW: u64 = 1 << 18;
/// Offset used for left limits at jumps.
pub const LEFT_OFFSET: f64 = 1.0 / 1_048_576.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Average {
    Exact(BigRational),
    Approx(Interval),
}

impl Average {
    pub fn interval(&self) -> Interval {
        match self {
            Average::Exact(r) => Interval::from_ratio(r),
            Average::Approx(i) => *i,
        }
    }
}

fn exact_mode(f: &FunctionSpec) -> bool {
    f.alpha_is_integer() && f.f_exact(2).is_some()
}

fn check_x(x: f64) -> Result<u64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("X = {x} must be positive")));
    }
    if x > DIRECT_LIMIT as f64 {
        return Err(Error::LimitExceeded(format!("X = {x} above {DIRECT_LIMIT}")));
    }
    Ok(x.floor() as u64)
}

/// Exact `f(ℓ)` for squarefree `ℓ` coprime to `q`, else zero.
fn exact_term(f: &FunctionSpec, q: u64, l: u64) -> Option<BigRational> {
    let fac = factorize(l);
    if !fac.is_squarefree() || gcd(l, q) != 1 {
        return Some(BigRational::zero());
    }
    let mut acc = BigRational::one();
    for p in fac.primes() {
        acc *= f.f_exact(p)?;
    }
    Some(acc)
}

/// Exact partial sums at the sorted cut points, kept as numerators over one
/// common denominator and returned as tight enclosures.
fn exact_partials(f: &FunctionSpec, q: u64, cuts: &[u64]) -> Option<Vec<Interval>> {
    let top = cuts.last().copied().unwrap_or(0);
    let terms: Vec<BigRational> = (1..=top).map(|l| exact_term(f, q, l)).collect::<Option<_>>()?;
    let mut d = BigInt::one();
    for t in &terms {
        if !t.is_zero() && !(&d % t.denom()).is_zero() {
            d = num::integer::lcm(d, t.denom().clone());
        }
    }
    let mut out = Vec::with_capacity(cuts.len());
    let mut n = BigInt::zero();
    let mut l = 0u64;
    for &c in cuts {
        while l < c {
            let t = &terms[l as usize];
            if !t.is_zero() {
                n += t.numer() * (&d / t.denom());
            }
            l += 1;
        }
        out.push(fraction_enclosure(&n, &d));
    }
    Some(out)
}

/// The exact sum `Σ_{ℓ≤n}`.
fn exact_sum(f: &FunctionSpec, q: u64, n: u64) -> Option<BigRational> {
    let mut s = BigRational::zero();
    for l in 1..=n {
        s += exact_term(f, q, l)?;
    }
    Some(s)
}

/// Interval partial sums at the sorted cut points, by segmented evaluation.
fn interval_partials(f: &FunctionSpec, q: u64, cuts: &[u64]) -> Result<Vec<Interval>> {
    let top = cuts.last().copied().unwrap_or(0);
    if top == 0 {
        return Ok(vec![Interval::ZERO; cuts.len()]);
    }
    let base: Vec<u64> = small_primes(isqrt(top) + 1);
    let base_vals: Vec<Interval> = base.iter().map(|&p| f.f_at_prime(p)).collect::<Result<_>>()?;
    let windows: Vec<(u64, u64)> = (0..=top / WINDOW).map(|k| (k * WINDOW + 1, ((k + 1) * WINDOW).min(top) + 1)).collect();
    let parts: Vec<(Vec<Interval>, Interval)> = windows
        .par_iter()
        .map(|&(lo, hi)| {
            let n = (hi - lo) as usize;
            let mut rem: Vec<u64> = (lo..hi).collect();
            let mut val = vec![Interval::ONE; n];
            let mut alive = vec![true; n];
            for (&p, &fp) in base.iter().zip(&base_vals) {
                let first = lo.div_ceil(p) * p;
                let mut m = first;
                while m < hi {
                    let i = (m - lo) as usize;
                    if alive[i] {
                        if q % p == 0 || (m / p) % p == 0 {
                            alive[i] = false;
                        } else {
                            val[i] = val[i] * fp;
                            rem[i] /= p;
                        }
                    }
                    m += p;
                }
            }
            let local: Vec<u64> = cuts.iter().copied().filter(|&c| c >= lo && c < hi).collect();
            let mut sums = Vec::with_capacity(local.len());
            let mut s = Interval::ZERO;
            let mut ci = 0;
            for i in 0..n {
                let l = lo + i as u64;
                if alive[i] {
                    let mut v = val[i];
                    if rem[i] > 1 {
                        if q % rem[i] == 0 {
                            v = Interval::ZERO;
                        } else {
                            v = v * f.f_at(&PrimeCtx::new(rem[i]))?;
                        }
                    }
                    s = s + v;
                }
                while ci < local.len() && local[ci] == l {
                    sums.push(s);
                    ci += 1;
                }
            }
            Ok((sums, s))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(cuts.len());
    let zeros = cuts.iter().take_while(|&&c| c == 0).count();
    out.extend(std::iter::repeat(Interval::ZERO).take(zeros));
    let mut offset = Interval::ZERO;
    for (sums, total) in parts {
        for s in sums {
            out.push(offset + s);
        }
        offset = offset + total;
    }
    Ok(out)
}

/// Enclosures of the partial sums at each `X` of a sorted list, with a
/// flag marking those accumulated exactly.
pub fn partial_sums(f: &FunctionSpec, q: u64, xs: &[f64]) -> Result<Vec<(Interval, bool)>> {
    let cuts: Vec<u64> = xs.iter().map(|&x| check_x(x)).collect::<Result<_>>()?;
    if cuts.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::DomainError("sweep points must be sorted".into()));
    }
    let approx = interval_partials(f, q, &cuts)?;
    let n_exact = if exact_mode(f) { cuts.iter().take_while(|&&c| c <= EXACT_CUTOFF).count() } else { 0 };
    let exact = exact_partials(f, q, &cuts[..n_exact]).unwrap_or_default();
    Ok(approx
        .into_iter()
        .enumerate()
        .map(|(i, a)| if i < exact.len() { (exact[i], true) } else { (a, false) })
        .collect())
}

/// `Σ_{ℓ≤X,(ℓ,q)=1} μ²(ℓ)f(ℓ)`; exact when `f(p)` is rational, α is an
/// integer and `X ≤ EXACT_CUTOFF`.
pub fn direct_average(f: &FunctionSpec, q: u64, x: f64) -> Result<Average> {
    let n = check_x(x)?;
    if exact_mode(f) && n <= EXACT_CUTOFF {
        if let Some(s) = exact_sum(f, q, n) {
            return Ok(Average::Exact(s));
        }
    }
    Ok(Average::Approx(interval_partials(f, q, &[n])?[0]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub partial_sum: Interval,
    pub exact: bool,
    pub main_value: Interval,
    pub residual: Interval,
    pub bound_value: Interval,
    pub margin: Interval,
}

impl SweepRow {
    pub fn passes(&self) -> bool {
        self.margin.lo() >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passes())
    }

    pub fn failures(&self) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| !r.passes()).collect()
    }

    pub fn min_margin(&self) -> f64 {
        self.rows.iter().map(|r| r.margin.lo()).fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `X,partial_sum,main,residual,bound,margin`; intervals
    /// are written as `[lo;hi]` at 12 digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("X,partial_sum,main,residual,bound,margin\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.x,
                csv_interval(r.partial_sum),
                csv_interval(r.main_value),
                csv_interval(r.residual),
                csv_interval(r.bound_value),
                csv_interval(r.margin)
            );
        }
        s
    }
}

fn csv_interval(x: Interval) -> String {
    format!("[{};{}]", decimal_bound(x, 12, Direction::Lower), decimal_bound(x, 12, Direction::Upper))
}

/// Checks the report at every grid point.
pub fn bound_sweep(report: &EstimateReport, f: &FunctionSpec, q: u64, grid: &[f64]) -> Result<SweepOutcome> {
    let mut xs = grid.to_vec();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if let Some(x) = xs.iter().find(|&&x| !report.domain.contains(x)) {
        return Err(Error::DomainError(format!("X = {x} outside the report's domain")));
    }
    let partials = partial_sums(f, q, &xs)?;
    let rows = xs
        .par_iter()
        .zip(partials.par_iter())
        .map(|(&x, &(partial, exact))| {
            let xi = Interval::point(x);
            let main_value = report.main.eval(xi)?;
            let residual = report.quantity(partial) - main_value;
            let bound_value = report.bound(xi)?;
            Ok(SweepRow {
                x,
                partial_sum: partial,
                exact,
                main_value,
                residual,
                bound_value,
                margin: bound_value - residual.abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutcome { rows })
}

/// Jump points `n ≤ min(dense_max, x_max)` with `n` squarefree, each with
/// its left limit `n − 2^{−20}`, then a geometric grid of ratio 1.05 up to
/// `x_max`, then 50 log-uniform points in `(0, 1)` when `include_small`.
pub fn default_grid(x_max: f64, include_small: bool) -> Vec<f64> {
    let dense_max = 10_000.0f64.min(x_max);
    let mut g = Vec::new();
    if include_small {
        for k in 0..50 {
            g.push(10f64.powf(-6.0 + 6.0 * k as f64 / 50.0));
        }
    }
    let mut n = 1u64;
    while (n as f64) <= dense_max {
        if crate::primes::is_squarefree(n) {
            if include_small || n > 1 {
                g.push(n as f64 - LEFT_OFFSET);
            }
            g.push(n as f64);
        }
        n += 1;
    }
    let mut x = dense_max;
    while x * 1.05 <= x_max {
        x *= 1.05;
        g.push(x);
    }
    if x_max > dense_max {
        g.push(x_max);
    }
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Non-rigorous `max X^w |partial(X) − main(X)|` over jump points and
/// their left limits in `[lo, hi]`, plus a log grid of 200 points when
/// `lo < 1`.
pub fn empirical_sup(f: &FunctionSpec, q: u64, main: &MainTermDescriptor, weight: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo >= 0.0 && lo < hi && hi <= 1e7) {
        return Err(Error::DomainError(format!("range [{lo}, {hi}] outside (0, 1e7]")));
    }
    let mut xs = Vec::new();
    if lo < 1.0 {
        let a = lo.max(1e-9).ln();
        let b = hi.min(1.0 - LEFT_OFFSET).ln();
        for k in 0..=200 {
            xs.push((a + (b - a) * k as f64 / 200.0).exp());
        }
    }
    let mut n = lo.ceil().max(1.0) as u64;
    while (n as f64) <= hi {
        if gcd(n, q) == 1 && crate::primes::is_squarefree(n) {
            if n as f64 - LEFT_OFFSET >= lo {
                xs.push(n as f64 - LEFT_OFFSET);
            }
            xs.push(n as f64);
        }
        n += 1;
    }
    xs.retain(|&x| x > 0.0 && x >= lo && x <= hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let partials = partial_sums(f, q, &xs)?;
    let mut best = 0.0f64;
    for (x, p) in xs.iter().zip(partials) {
        let r = p.0.mid() - main.eval(Interval::point(*x))?.mid();
        best = best.max(x.powf(weight) * r.abs());
    }
    Ok(best)
}

/// Non-rigorous supremum of `X^δ|Σ_{n≤X} n^{−α} − main(X)|` over `X > 0`,
/// with `main(X) = log X + γ` for α = 1 and `ζ(α) − X^{1−α}/(α−1)`
/// otherwise. Sampled at `points` log-spaced `Y ∈ (1, y_max]`, both as
/// `X = 1/Y` (empty sums) and `X = Y`, and at every integer `n ≤ 10^4` and
/// its left limit.
pub fn delta_residual_grid_sup(alpha: f64, delta: f64, points: usize, y_max: f64) -> Result<f64> {
    if !(y_max > 1.0 && y_max <= 1e7) || points == 0 {
        return Err(Error::DomainError(format!("grid up to {y_max} with {points} points")));
    }
    let one = (alpha - 1.0).abs() < 1e-15;
    let z = if one { 0.0 } else { crate::zetapow::zeta(Interval::point(alpha))?.mid() };
    let main = |x: f64| if one { x.ln() + Interval::gamma().mid() } else { z - x.powf(1.0 - alpha) / (alpha - 1.0) };
    let n_max = y_max.floor() as usize;
    let mut prefix = vec![0.0f64; n_max + 1];
    for n in 1..=n_max {
        prefix[n] = prefix[n - 1] + (n as f64).powf(-alpha);
    }
    let value = |x: f64| {
        let s = if x < 1.0 { 0.0 } else { prefix[x.floor() as usize] };
        x.powf(delta) * (s - main(x)).abs()
    };
    let mut best = 0.0f64;
    let top = y_max.ln();
    for k in 1..=points {
        let y = (top * k as f64 / points as f64).exp().min(y_max);
        best = best.max(value(1.0 / y)).max(value(y));
    }
    for n in 1..=n_max.min(10_000) {
        best = best.max(value(n as f64)).max(value(n as f64 - LEFT_OFFSET));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use num::BigInt;

    #[test]
    fn hand_enumeration() {
        let a = direct_average(&presets::one_over_p(), 2, 10.0).unwrap();
        assert_eq!(a, Average::Exact(BigRational::new(BigInt::from(176), BigInt::from(105))));
        let u = direct_average(&presets::unit(), 1, 100.0).unwrap();
        assert_eq!(u, Average::Exact(BigRational::from_integer(BigInt::from(61))));
        let z = direct_average(&presets::one_over_phi(), 3, 0.5).unwrap();
        assert_eq!(z.interval(), Interval::ZERO);
    }

    #[test]
    fn interval_walk_agrees_with_exact() {
        let f = presets::one_over_phi();
        let xs = [1.0, 17.5, 999.0, 10_000.0];
        let cuts: Vec<u64> = xs.iter().map(|&x| x as u64).collect();
        let approx = interval_partials(&f, 6, &cuts).unwrap();
        let exact = exact_partials(&f, 6, &cuts).unwrap();
        for ((a, e), &c) in approx.iter().zip(&exact).zip(&cuts) {
            let s = exact_sum(&f, 6, c).unwrap();
            assert!(a.contains_rational(&s) && e.contains_rational(&s));
            assert!(e.width() <= 4.0 * f64::EPSILON * e.mid().abs().max(1.0));
        }
    }

    #[test]
    fn delta_oracle_below_certified() {
        let g = delta_residual_grid_sup(1.0, 1.0 / 3.0, 2000, 1e5).unwrap();
        let d = crate::tailconst::delta_constant(Interval::ONE, Interval::ratio(1, 3)).unwrap().value;
        assert!(g <= d.hi() && g > 0.9 * d.lo(), "{g} vs {d:?}");
    }
}
