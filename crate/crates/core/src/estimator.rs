//! Explicit estimates `Σ_{ℓ≤X,(ℓ,q)=1} μ²(ℓ)f(ℓ) = main(X) + O*(bound(X))`.
//!
//! Two routes are offered. The convolution route writes `ℓ^α μ²(ℓ)f(ℓ)` as
//! `h ⋆ 1_q` and needs an exponent δ below `α − 1/2`. The critical route
//! expands `f(ℓ)ℓ^α = Π(1 + i_f(p))` over the squarefree sums
//! `Σ μ²(e)/e^α`, whose errors are already at `X^{1/2−α}`, and reaches the
//! exponent `α − 1/2` whenever `β − α > 1/2`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerprod::{
    critical_half_sum, h_at, h_at_one_minus_alpha, mathfrak_b, n_alpha_product, p_alpha_product, small_p_alpha, t_f_q,
    Acceleration, HVariant,
};
use crate::function::FunctionSpec;
use crate::interval::Interval;
use crate::mainterm::{MainTermDescriptor, Shape};
use crate::presets;
use crate::primefn::{q_interval, PrimeCtx, Q64};
use crate::primes::{factorize, kappa, kappa_s, phi, phi_s};
use crate::supsearch::{empty_range_sup_log, half_totient_ratio, verified_sup_with, SupResult};
use crate::tailconst::{delta_constant, validate_delta_for_theorem};
use crate::zetapow::zeta_rigorous;

/// Cited: `sup_{X≥1} √X|Σ_{ℓ≤X} μ²(ℓ)/ℓ − (6/π²)(log X + 𝔟_1)| ≤ 0.43`.
pub const D1_CITED: f64 = 0.43;
/// Cited: `sup_{X≥1573} |Σ_{ℓ≤X,(ℓ,2)=1} μ²(ℓ) − 4X/π²|/√X ≤ 9/70`.
pub const SQUAREFREE_ODD_CITED: (i64, i64) = (9, 70);
/// Range of the verified search on `[1, X_max]`.
pub const C2_SEARCH_MAX: u64 = 1573;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub prime_limit: u64,
    pub delta: Q64,
    pub zeta_cutoff: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { prime_limit: 10_000_000, delta: Q64::new(1, 3), zeta_cutoff: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Every `X > 0`.
    Positive,
    /// Every `X ≥ 1`.
    AtLeastOne,
}

impl Domain {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::Positive => x > 0.0,
            Domain::AtLeastOne => x >= 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Convolution,
    CriticalAboveHalf,
    CriticalBelowHalf,
    CriticalAtHalf,
    CoprimePower,
    SquareTail,
    SquarefreeCount,
}

/// `|quantity(X) − main(X)| ≤ additive + constant·X^{−exponent}·L(X)` for all
/// `X` in the domain, with `L(X) = 1 + log(X)/2` when `error_has_log` and 1
/// otherwise. The quantity is the partial sum, or `total − partial sum` when
/// `complement_of` holds the total.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub main: MainTermDescriptor,
    pub error_constant: Interval,
    pub error_exponent: Interval,
    pub error_has_log: bool,
    pub additive_error_const: Interval,
    pub domain: Domain,
    pub provenance: Provenance,
    pub complement_of: Option<Interval>,
}

impl EstimateReport {
    fn new(main: MainTermDescriptor, constant: Interval, exponent: Interval, provenance: Provenance) -> Self {
        EstimateReport {
            main,
            error_constant: constant,
            error_exponent: exponent,
            error_has_log: false,
            additive_error_const: Interval::ZERO,
            domain: Domain::Positive,
            provenance,
            complement_of: None,
        }
    }

    /// The claimed bound at `X`, using the upper ends of the constants.
    pub fn bound(&self, x: Interval) -> Result<Interval> {
        let c = Interval::point(self.error_constant.hi());
        let mut b = c * x.pow(-self.error_exponent)?;
        if self.error_has_log {
            b = b * (Interval::ONE + x.ln()? / 2.0);
        }
        Ok(Interval::point(self.additive_error_const.hi()) + b)
    }

    /// The estimated quantity given the partial sum.
    pub fn quantity(&self, partial: Interval) -> Interval {
        match self.complement_of {
            Some(t) => t - partial,
            None => partial,
        }
    }
}

/// Constants of the squarefree sums `Σ_{(ℓ,v)=1} μ²(ℓ)/ℓ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalConstants {
    pub b1: Interval,
    pub b2: Interval,
    pub c2: SupResult,
    pub d1: Interval,
    pub d2: Interval,
    /// `E_1^{(1)}`, `E_1^{(2)}`.
    pub e1: [Interval; 2],
    pub h1: Interval,
    pub h2: Interval,
}

fn constants_cache() -> &'static Mutex<HashMap<u64, CriticalConstants>> {
    static C: OnceLock<Mutex<HashMap<u64, CriticalConstants>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn critical_constants(prime_limit: u64) -> Result<CriticalConstants> {
    if let Some(c) = constants_cache().lock().expect("cache").get(&prime_limit) {
        return Ok(*c);
    }
    let b1 = mathfrak_b(1, prime_limit)?;
    let b2 = mathfrak_b(2, prime_limit)?;
    let c2 = verified_sup_with(2, C2_SEARCH_MAX, b2)?;
    let (n, d) = SQUAREFREE_ODD_CITED;
    let c21 = Interval::ratio(3 * n, d);
    let scale2 = half_totient_ratio(2)?;
    let d1 = Interval::point(D1_CITED);
    let d2 = scale2 * c21.max(&c2.bound);
    let e11 = empty_range_sup_log(1, b1)?.max(&d1);
    let e12 = scale2 * empty_range_sup_log(2, b2)?.max(&c21).max(&c2.bound);
    let c = CriticalConstants {
        b1,
        b2,
        c2,
        d1,
        d2,
        e1: [e11, e12],
        h1: squarefree_count_bound(1)?,
        h2: squarefree_count_bound(2)?,
    };
    constants_cache().lock().expect("cache").insert(prime_limit, c);
    Ok(c)
}

fn check_v(v: u64) -> Result<usize> {
    match v {
        1 => Ok(0),
        2 => Ok(1),
        _ => Err(Error::DomainError(format!("v = {v} must be 1 or 2"))),
    }
}

fn is_one(x: Interval) -> bool {
    x.is_point() && x.lo() == 1.0
}

/// `E_α^{(v)}`, the error constant of `Σ_{ℓ≤X,(ℓ,v)=1} μ²(ℓ)/ℓ^α` in the
/// normalisation `(√v/φ_{1/2}(v))·E_α^{(v)}/X^{α−1/2}`.
pub fn e_alpha_v(alpha: Interval, v: u64, cfg: &Config) -> Result<Interval> {
    let idx = check_v(v)?;
    let half = Interval::point(0.5);
    if alpha.certainly_le(&half) != Some(false) {
        return Err(Error::AlphaOutOfRange(format!("alpha {alpha:?} must exceed 1/2")));
    }
    let k = critical_constants(cfg.prime_limit)?;
    if is_one(alpha) {
        return Ok(k.e1[idx]);
    }
    if alpha.contains(1.0) {
        return Err(Error::AlphaOutOfRange(format!("alpha {alpha:?} straddles 1")));
    }
    let dv = if v == 1 { k.d1 } else { k.d2 };
    let am1 = alpha - Interval::ONE;
    let ratio = am1.abs() / (alpha - half);
    let c1 = dv * (Interval::ONE + ratio);
    let empty = crate::supsearch::empty_range_sup_power(alpha, v)? * half_totient_ratio(v)?;
    Ok(c1.max(&empty))
}

/// `H_v`: `√3(1 − 6/π²)` for `v = 1` and `1 − 4/π²` for `v = 2`.
pub fn squarefree_count_bound(v: u64) -> Result<Interval> {
    check_v(v)?;
    let pi2 = Interval::pi().sqr();
    Ok(if v == 1 {
        Interval::point(3.0).sqrt()? * (Interval::ONE - Interval::point(6.0) / pi2)
    } else {
        Interval::ONE - Interval::point(4.0) / pi2
    })
}

/// `Σ_{ℓ≤X,(ℓ,v)=1} μ²(ℓ) = (6/π²)(v/κ(v))X + O*(H_v √X)`.
pub fn squarefree_count_estimate(v: u64) -> Result<EstimateReport> {
    // H_v is attained at X = 3 (v = 1), so the report carries it rounded up
    // at the 12th decimal; otherwise no sweep can certify that point.
    let exact = squarefree_count_bound(v)?;
    let up: f64 = crate::interval::decimal_bound(exact, 12, crate::interval::Direction::Upper).parse().expect("decimal");
    let h = Interval::point(up).max(&exact);
    let c = Interval::from_u64(6 * v) / (Interval::pi().sqr() * Interval::from_u64(kappa(v)));
    let main = MainTermDescriptor::new().with(c, Shape::XPow { exponent: Interval::ONE });
    Ok(EstimateReport::new(main, h, Interval::point(-0.5), Provenance::SquarefreeCount))
}

fn accel() -> Acceleration {
    Acceleration::default_auto()
}

fn q_ratio(q: u64, num: u64) -> Interval {
    Interval::from_u64(num) / Interval::from_u64(q)
}

fn sum_over_divisors(q: u64, term: impl Fn(Interval) -> Result<Interval>) -> Result<Interval> {
    let mut acc = Interval::ZERO;
    for (p, _) in factorize(q).0 {
        acc = acc + term(Interval::from_u64(p))?;
    }
    Ok(acc)
}

/// The main term `F_α^q(X)` shared by both routes when `α > 1/2`.
pub fn main_term_f(f: &FunctionSpec, q: u64, cfg: &Config) -> Result<MainTermDescriptor> {
    let limit = cfg.prime_limit;
    let h0 = h_at(f, q, Q64::zero(), HVariant::Signed, limit, &accel())?;
    let phiq = q_ratio(q, phi(q));
    if is_one(f.alpha) {
        if h0.contains_zero() {
            return Err(Error::DegenerateFunction(format!("{}: H(0) may vanish", f.name)));
        }
        let t = t_f_q(f, q, limit)?;
        let local = sum_over_divisors(q, |p| Ok(p.ln()? / (p - Interval::ONE)))?;
        let c = h0 * phiq;
        return Ok(MainTermDescriptor::new()
            .with(c, Shape::LogX)
            .with(c * (t + Interval::gamma() + local), Shape::Const));
    }
    let alpha = f.alpha;
    let z = zeta_rigorous(alpha, cfg.zeta_cutoff)?.value;
    let h1 = h_at_one_minus_alpha(f, q, limit, &accel())?;
    let am1 = alpha - Interval::ONE;
    let phia = phi_s(q, alpha)? / Interval::from_u64(q).pow(alpha)?;
    Ok(MainTermDescriptor::new()
        .with(h0 * z * phia, Shape::Const)
        .with(-(h1 * phiq / am1), Shape::XPow { exponent: -am1 }))
}

/// Estimate by the convolution route with exponent δ.
pub fn convolution_estimate(f: &FunctionSpec, q: u64, cfg: &Config) -> Result<EstimateReport> {
    check_q(q)?;
    let half = Interval::point(0.5);
    if f.alpha.certainly_le(&half) != Some(false) {
        return Err(Error::AlphaOutOfRange(format!("{}: alpha must exceed 1/2", f.name)));
    }
    if f.beta.certainly_le(&Interval::ONE) != Some(false) {
        return Err(Error::DomainError(format!("{}: beta must exceed 1", f.name)));
    }
    let delta = q_interval(cfg.delta);
    if !validate_delta_for_theorem(f.alpha, f.beta, delta)? {
        return Err(Error::DeltaOutOfRange(format!(
            "delta {} outside (max(0, alpha - 1), min(beta - 1, alpha - 1/2))",
            cfg.delta
        )));
    }
    let dconst = delta_constant(f.alpha, delta)?.value;
    let hbar = h_at(f, q, -cfg.delta, HVariant::Absolute, cfg.prime_limit, &accel())?;
    let ad = f.alpha - delta;
    let kq = kappa_s(q, ad)? / Interval::from_u64(q).pow(ad)?;
    let main = main_term_f(f, q, cfg)?;
    Ok(EstimateReport::new(main, dconst * kq * hbar, delta, Provenance::Convolution))
}

fn check_q(q: u64) -> Result<()> {
    if q == 0 {
        Err(Error::DomainError("q must be positive".into()))
    } else {
        Ok(())
    }
}

/// `|2^α f(2) − 1|`.
fn defect_at_two(f: &FunctionSpec) -> Result<Interval> {
    f.defect(&PrimeCtx::new(2))
}

/// The weight `w`: `E^{(2)}` for even `q`, otherwise the combination of
/// `E^{(1)}` and `E^{(2)}` weighted by the defect at 2.
pub fn w_weight(e1: Interval, e2: Interval, i2: Interval, q: u64) -> Result<Interval> {
    if q % 2 == 0 {
        return Ok(e2);
    }
    let s = Interval::point(2.0).sqrt()? - Interval::ONE;
    Ok(s / (s + i2) * (e1 + i2 * e2 / s))
}

/// Estimate reaching the critical exponent; requires `β − α > 1/2`.
pub fn critical_estimate(f: &FunctionSpec, q: u64, cfg: &Config) -> Result<EstimateReport> {
    check_q(q)?;
    let half = Interval::point(0.5);
    if (f.beta - f.alpha).certainly_le(&half) != Some(false) {
        return Err(Error::BetaGapTooSmall);
    }
    let limit = cfg.prime_limit;
    let big_p = p_alpha_product(f, limit, &accel())?;
    let pq = small_p_alpha(f, q)?;
    let i2 = defect_at_two(f)?;
    let alpha = f.alpha;
    let at_half = alpha.is_point() && alpha.lo() == 0.5;
    if half.certainly_lt(&alpha) == Some(true) {
        let e1 = e_alpha_v(alpha, 1, cfg)?;
        let e2 = e_alpha_v(alpha, 2, cfg)?;
        let w = w_weight(e1, e2, i2, q)?;
        let main = main_term_f(f, q, cfg)?;
        return Ok(EstimateReport::new(main, pq * w * big_p, alpha - half, Provenance::CriticalAboveHalf));
    }
    if alpha.certainly_lt(&half) != Some(true) && !at_half {
        return Err(Error::AlphaOutOfRange(format!("alpha {alpha:?} straddles 1/2")));
    }
    let k = critical_constants(limit)?;
    let w = w_weight(k.e1[0], k.e1[1], i2, q)?;
    let n = n_alpha_product(f, q, limit, &accel())?;
    let oma = Interval::ONE - alpha;
    let coef = n * q_ratio(q, phi(q)) / oma;
    let main = MainTermDescriptor::new().with(coef, Shape::XPow { exponent: oma });
    if alpha.certainly_lt(&half) == Some(true) {
        let two = Interval::point(2.0);
        let factor = Interval::ONE + (two - two * alpha) / (Interval::ONE - two * alpha);
        return Ok(EstimateReport::new(main, pq * factor * w * big_p, alpha - half, Provenance::CriticalBelowHalf));
    }
    let s = critical_half_sum(f, q, limit)?;
    let local = sum_over_divisors(q, |p| Ok(p.ln()? / (p - Interval::ONE)))?;
    let c = (n * q_ratio(q, phi(q)) * (s + Interval::gamma() + local - Interval::point(2.0))).abs();
    let mut r = EstimateReport::new(main, pq * w * big_p, Interval::ZERO, Provenance::CriticalAtHalf);
    r.additive_error_const = c;
    r.error_has_log = true;
    r.domain = Domain::AtLeastOne;
    Ok(r)
}

/// Picks the critical route when `β − α > 1/2`, else the convolution route.
/// The flag reports whether a fallback happened.
pub fn auto_estimate(f: &FunctionSpec, q: u64, cfg: &Config) -> Result<(EstimateReport, bool)> {
    match critical_estimate(f, q, cfg) {
        Ok(r) => Ok((r, false)),
        Err(Error::BetaGapTooSmall) => Ok((convolution_estimate(f, q, cfg)?, true)),
        Err(e) => Err(e),
    }
}

/// `Σ_{ℓ≤X,(ℓ,q)=1} μ²(ℓ)/ℓ^α` with error `(√q/φ_{1/2}(q))·E_α^{(v)}/X^{α−1/2}`,
/// `v = 2` for even `q`.
pub fn coprime_power_estimate(q: u64, alpha: Interval, cfg: &Config) -> Result<EstimateReport> {
    check_q(q)?;
    let v = if q % 2 == 0 { 2 } else { 1 };
    let e = e_alpha_v(alpha, v, cfg)?;
    let half = Interval::point(0.5);
    let scale = Interval::from_u64(q).sqrt()? / phi_s(q, half)?;
    let pi2 = Interval::pi().sqr();
    let six = Interval::point(6.0);
    let lead = q_ratio(kappa(q), q) * six / pi2;
    let main = if is_one(alpha) {
        let bq = mathfrak_b(q, cfg.prime_limit)?;
        MainTermDescriptor::new().with(lead, Shape::LogX).with(lead * bq, Shape::Const)
    } else {
        let z = zeta_rigorous(alpha, cfg.zeta_cutoff)?.value;
        let z2 = zeta_rigorous(Interval::point(2.0) * alpha, cfg.zeta_cutoff)?.value;
        let qa = Interval::from_u64(q).pow(alpha)? / kappa_s(q, alpha)?;
        let am1 = alpha - Interval::ONE;
        MainTermDescriptor::new()
            .with(qa * z / z2, Shape::Const)
            .with(-(lead / am1), Shape::XPow { exponent: -am1 })
    };
    Ok(EstimateReport::new(main, scale * e, alpha - half, Provenance::CoprimePower))
}

/// `Σ_{ℓ>X,(ℓ,q)=1} μ²(ℓ)/ℓ² = (q/κ(q))(6/π²)/X + O*((√q/φ_{1/2}(q))E_2^{(v)}/X^{3/2})`.
pub fn mu2_square_tail(q: u64, cfg: &Config) -> Result<EstimateReport> {
    let two = Interval::point(2.0);
    let mut r = coprime_power_estimate(q, two, cfg)?;
    let total = r.main.coefficient(&Shape::Const).expect("constant term");
    let pole = r.main.coefficient(&Shape::XPow { exponent: -Interval::ONE }).expect("pole term");
    r.main = MainTermDescriptor::new().with(-pole, Shape::XPow { exponent: -Interval::ONE });
    r.complement_of = Some(total);
    r.provenance = Provenance::SquareTail;
    Ok(r)
}

/// `j(q)`: multiplicative, `j(2) = 21/25`, `j(p) = 1 + (p−2)/(p^{3/2} − √p + 1)`.
pub fn ra13_j(q: u64) -> Result<Interval> {
    let mut acc = Interval::ONE;
    for (p, _) in factorize(q).0 {
        let pi = Interval::from_u64(p);
        acc = acc
            * if p == 2 {
                Interval::ratio(21, 25)
            } else {
                let sp = pi.sqrt()?;
                Interval::ONE + (pi - Interval::point(2.0)) / (pi * sp - sp + Interval::ONE)
            };
    }
    Ok(acc)
}

/// Whether `(p−2)/(p^{3/2} − p − √p + 2) < 1/√p` holds certifiably.
pub fn j_tail_inequality(p: u64) -> Result<bool> {
    let pi = Interval::from_u64(p);
    let r = pi.sqrt()?;
    let lhs = (pi - Interval::point(2.0)) / (pi * r - pi - r + Interval::point(2.0));
    Ok(lhs.certainly_lt(&r.recip()?) == Some(true))
}

pub const RA13_MODULI: [u64; 6] = [2, 3, 5, 6, 10, 14];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ra13Row {
    pub q: u64,
    pub ours: Interval,
    pub theirs: Interval,
    pub improved: bool,
}

/// Our error constant for `Σ_{(ℓ,q)=1} μ²(ℓ)/φ(ℓ)` at exponent 1/2 against `5.9·j(q)`.
pub fn ra13_comparison(q: u64, cfg: &Config) -> Result<Ra13Row> {
    if !RA13_MODULI.contains(&q) {
        return Err(Error::UnsupportedModulus(format!("q = {q} is not one of {RA13_MODULI:?}")));
    }
    let ours = critical_estimate(&presets::one_over_phi(), q, cfg)?.error_constant;
    let theirs = Interval::point(5.9) * ra13_j(q)?;
    Ok(Ra13Row { q, ours, theirs, improved: ours.hi() <= theirs.lo() })
}

/// Error constants for `Σ μ²(ℓ)/φ(ℓ)` at exponent 1/2: odd and even moduli
/// before the local factor `p(q)`.
pub fn consequences_constants(cfg: &Config) -> Result<(Interval, Interval)> {
    let f = presets::one_over_phi();
    let odd = critical_estimate(&f, 1, cfg)?.error_constant;
    let big_p = p_alpha_product(&f, cfg.prime_limit, &accel())?;
    let k = critical_constants(cfg.prime_limit)?;
    Ok((odd, k.e1[1] * big_p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config { prime_limit: 1_000_000, ..Config::default() }
    }

    #[test]
    fn square_tail_main() {
        let r = mu2_square_tail(1, &cfg()).unwrap();
        let m = r.main.eval(Interval::point(10.0)).unwrap();
        assert!((m.mid() - 0.0607927).abs() < 1e-6);
    }

    #[test]
    fn j_values() {
        assert!(ra13_j(2).unwrap().contains(0.84));
    }
}
