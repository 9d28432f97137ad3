//! Verified suprema of weighted residuals of `Σ μ²(ℓ)/ℓ`, on `[1, X_max]`
//! and on the empty range `0 < X < 1`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eulerprod::mathfrak_b;
use crate::interval::{fraction_enclosure, Interval};
use crate::primes::{gcd, is_squarefree, kappa, kappa_s, phi_s, small_primes};
use crate::zetapow::zeta;

pub const MAX_SEARCH: u64 = 100_000;
/// Prime limit used for `𝔟_v` when none is given.
pub const DEFAULT_SUP_PRIME_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupResult {
    /// `[best certified lower value, certified upper bound]`.
    pub bound: Interval,
    pub witness_x: Interval,
    /// Whether the witness is approached from the left of a jump.
    pub left_limit: bool,
    pub attained_lower: Interval,
}

fn check_v(v: u64) -> Result<()> {
    if v == 1 || v == 2 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("v = {v} must be 1 or 2")))
    }
}

/// `6v/(κ(v)π²)`.
pub fn main_coefficient(v: u64) -> Interval {
    Interval::from_u64(6 * v) / (Interval::from_u64(kappa(v)) * Interval::pi().sqr())
}

/// Enclosures of `S_v(n) = Σ_{ℓ≤n,(ℓ,v)=1} μ²(ℓ)/ℓ` for `n = 0..=x_max`,
/// accumulated exactly over the common denominator `Π_{p≤x_max}`.
pub fn step_values(v: u64, x_max: u64) -> Vec<Interval> {
    let mut d = BigInt::one();
    for p in small_primes(x_max) {
        if v % p != 0 {
            d *= p;
        }
    }
    let mut num = BigInt::zero();
    let mut out = Vec::with_capacity(x_max as usize + 1);
    out.push(Interval::ZERO);
    for l in 1..=x_max {
        if gcd(l, v) == 1 && is_squarefree(l) {
            num += &d / l;
        }
        out.push(fraction_enclosure(&num, &d));
    }
    out
}

/// Exact `S_v(n)` for modest `n`.
pub fn step_value_exact(v: u64, n: u64) -> BigRational {
    let mut s = BigRational::zero();
    for l in 1..=n {
        if gcd(l, v) == 1 && is_squarefree(l) {
            s += BigRational::new(BigInt::one(), BigInt::from(l));
        }
    }
    s
}

struct Piece {
    upper: f64,
    lower: f64,
    witness: f64,
    left_limit: bool,
}

fn weighted(x: Interval, k: Interval, c: Interval) -> Result<Interval> {
    Ok(x.sqrt()? * (k - c * x.ln()?).abs())
}

fn analyse_piece(a: u64, b: u64, s: Interval, c: Interval, bv: Interval) -> Result<Piece> {
    let k = s - c * bv;
    let xa = Interval::from_u64(a);
    let xb = Interval::from_u64(b);
    let va = weighted(xa, k, c)?;
    let vb = weighted(xb, k, c)?;
    let mut upper = va.hi().max(vb.hi());
    let (lower, witness, left_limit) = if vb.lo() > va.lo() { (vb.lo(), b as f64, b > a) } else { (va.lo(), a as f64, false) };
    if a < b {
        let crit = (k / c - Interval::point(2.0)).exp();
        if let Some(clip) = crit.intersect(&xa.hull(&xb)) {
            upper = upper.max(weighted(clip, k, c)?.hi());
        }
    }
    Ok(Piece { upper, lower, witness, left_limit })
}

/// Certified `sup_{1≤X≤X_max} √X |S_v(X) − (6v/(κ(v)π²))(log X + 𝔟_v)|`.
pub fn verified_sup_weighted_residual(v: u64, x_max: u64) -> Result<SupResult> {
    check_v(v)?;
    let bv = mathfrak_b(v, DEFAULT_SUP_PRIME_LIMIT)?;
    verified_sup_with(v, x_max, bv)
}

/// As [`verified_sup_weighted_residual`] with a given enclosure of `𝔟_v`.
pub fn verified_sup_with(v: u64, x_max: u64, bv: Interval) -> Result<SupResult> {
    check_v(v)?;
    if x_max == 0 || x_max > MAX_SEARCH {
        return Err(Error::LimitExceeded(format!("X_max = {x_max} outside [1, {MAX_SEARCH}]")));
    }
    let c = main_coefficient(v);
    let steps = step_values(v, x_max);
    // Pieces [n, n+1) carry S(n); the last point X_max is its own piece.
    let mut ranges: Vec<(u64, u64)> = (1..x_max).map(|n| (n, n + 1)).collect();
    ranges.push((x_max, x_max));
    let pieces: Vec<Piece> = ranges
        .par_iter()
        .map(|&(a, b)| analyse_piece(a, b, steps[a as usize], c, bv))
        .collect::<Result<_>>()?;
    let mut best = &pieces[0];
    let mut upper = f64::NEG_INFINITY;
    for p in &pieces {
        upper = upper.max(p.upper);
        if p.lower > best.lower {
            best = p;
        }
    }
    Ok(SupResult {
        bound: Interval::new(best.lower, upper)?,
        witness_x: Interval::point(best.witness),
        left_limit: best.left_limit,
        attained_lower: Interval::new(best.lower, upper.max(best.lower))?,
    })
}

/// `sup_{0<X<1} √X |(6v/(κ(v)π²))(log X + 𝔟_v)| = 6v𝔟_v/(κ(v)π²)`, after
/// certifying that the endpoint beats the interior critical value.
pub fn empty_range_sup_log(v: u64, bv: Interval) -> Result<Interval> {
    check_v(v)?;
    let c = main_coefficient(v);
    let at_one = c * bv;
    let at_crit = Interval::point(2.0) * c * (-(Interval::ONE + bv / 2.0)).exp();
    match at_crit.certainly_lt(&at_one) {
        Some(true) => Ok(at_one),
        _ => Err(Error::MaxAmbiguous(format!("empty range sup for v = {v}: {at_crit:?} vs {at_one:?}"))),
    }
}

/// `sup_{0<X<1} X^{α−1/2}|main(X)|` for `Σ_{(ℓ,v)=1} μ²(ℓ)/ℓ^α`, α ≠ 1:
/// `(v/κ(v))·6/(|α−1|π²)·max{|g(1)|, |g(x_0)|}` with
/// `g(X) = A X^{α−1/2} − √X`.
pub fn empty_range_sup_power(alpha: Interval, v: u64) -> Result<Interval> {
    check_v(v)?;
    let half = Interval::point(0.5);
    if alpha.certainly_le(&half) != Some(false) || alpha.contains(1.0) {
        return Err(Error::AlphaOutOfRange(format!("alpha {alpha:?} must exceed 1/2 and differ from 1")));
    }
    let am1 = alpha - Interval::ONE;
    let vi = Interval::from_u64(v);
    let kap = Interval::from_u64(kappa(v));
    let pi2 = Interval::pi().sqr();
    let z = zeta(alpha)?;
    let z2 = zeta(Interval::point(2.0) * alpha)?;
    let a = vi.pow(am1)? * kap * pi2 * z * am1 / (Interval::point(6.0) * kappa_s(v, alpha)? * z2);
    let g1 = a - Interval::ONE;
    let k = (Interval::point(2.0) * a * (alpha - half)).recip()?;
    let sqrt_x0 = k.pow((Interval::point(2.0) * am1).recip()?)?;
    let gx0 = -am1 / (alpha - half) * sqrt_x0;
    let scale = vi / kap * Interval::point(6.0) / (am1.abs() * pi2);
    Ok(scale * g1.abs().max(&gx0.abs()))
}

/// `φ_{1/2}(v)/√v`, the scaling of the `v = 2` constants.
pub fn half_totient_ratio(v: u64) -> Result<Interval> {
    let half = Interval::point(0.5);
    Ok(phi_s(v, half)? / Interval::from_u64(v).sqrt()?)
}

/// Non-rigorous maximum of `√X |S_v(X) − main(X)|` over a sorted grid in `[1, X_max]`.
pub fn grid_sup(v: u64, bv: f64, grid: &[f64]) -> f64 {
    let x_max = grid.iter().cloned().fold(1.0, f64::max) as u64;
    let steps: Vec<f64> = step_values(v, x_max).iter().map(|s| s.mid()).collect();
    let c = main_coefficient(v).mid();
    grid.iter()
        .map(|&x| {
            let s = steps[x.floor() as usize];
            x.sqrt() * (s - c * (x.ln() + bv)).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_match_exact() {
        let s = step_values(2, 10);
        let e = step_value_exact(2, 10);
        assert!(s[10].contains_rational(&e));
        assert!(s[2].contains(1.0));
    }

    #[test]
    fn big_denominators() {
        let s = step_values(1, 3000);
        let e = step_value_exact(1, 3000);
        assert!(s[3000].contains_rational(&e));
        assert!(s[3000].width() < 1e-12);
    }

    #[test]
    fn power_sup_at_two() {
        let v = empty_range_sup_power(Interval::point(2.0), 1).unwrap();
        assert!((v.mid() - 9.0 / std::f64::consts::PI.powi(2)).abs() < 1e-6);
    }
}
