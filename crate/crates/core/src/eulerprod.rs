//! Certified sums and Euler products over primes with rigorous tails.
//!
//! Primes up to the sieve limit are summed or multiplied in interval
//! arithmetic. Beyond the limit each term is dominated by a power majorant
//! `Σ c_i p^{−s_i}` (optionally times `log p`), and the prime tail is bounded
//! by the corresponding integer tail. Products can be accelerated by peeling
//! zeta factors: `factor(p)·Π(1 − p^{−s_i})^{e_i}` decays faster than
//! `factor(p)`, and the removed part is restored as `Π ζ(s_i)^{e_i}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::interval::Interval;
use crate::primefn::{common_denominator, q_interval, Expr, PrimeCtx, TailSign, URat, Q64};
use crate::primes::{factorize, phi_s, Sieve};
use crate::zetapow::{zeta_rigorous, DEFAULT_ZETA_CUTOFF};

/// Primes from this point on are checked against the tail majorant.
pub const CHECKPOINT: u64 = 100_000;
const SUP_PIECES: u32 = 64;

pub type TermFn = Arc<dyn Fn(&PrimeCtx) -> Result<Interval> + Send + Sync>;

/// `Σ c_i p^{−s_i}`, times `log p` when `with_log` is set, valid for
/// `p ≥ valid_from`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerMajorant {
    pub terms: Vec<(Interval, Interval)>,
    pub with_log: bool,
    pub valid_from: u64,
}

impl PowerMajorant {
    pub fn zero(valid_from: u64) -> PowerMajorant {
        PowerMajorant { terms: Vec::new(), with_log: false, valid_from }
    }

    pub fn single(c: Interval, s: Interval, with_log: bool, valid_from: u64) -> PowerMajorant {
        PowerMajorant { terms: vec![(c, s)], with_log, valid_from }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.hi() == 0.0)
    }

    pub fn at(&self, ctx: &PrimeCtx) -> Interval {
        let mut acc = Interval::ZERO;
        for &(c, s) in &self.terms {
            acc = acc + c * ctx.pow_interval(-s);
        }
        if self.with_log {
            acc * ctx.ln
        } else {
            acc
        }
    }

    /// Upper bound for `Σ_{n>N}` of the majorant over all integers.
    pub fn tail_sum(&self, n: u64) -> Result<Interval> {
        let nn = Interval::from_u64(n);
        let mut acc = Interval::ZERO;
        for &(c, s) in &self.terms {
            if c.hi() == 0.0 {
                continue;
            }
            if s.lo() <= 1.0 {
                return Err(Error::TailDiverges(format!("majorant exponent {s:?} is not above 1")));
            }
            let sm1 = s - Interval::ONE;
            let head = nn.pow(-sm1)? / sm1;
            let t = if self.with_log {
                // ∫_N^∞ log x · x^{−s} dx, valid since the integrand decreases for x ≥ N ≥ e^{1/s}.
                head * (nn.ln()? + sm1.recip()?)
            } else {
                head
            };
            acc = acc + c * t;
        }
        Ok(Interval::new(0.0, acc.hi())?)
    }

    /// Upper bound for the majorant at any `p > N` (without the log factor).
    pub fn max_beyond(&self, n: u64) -> Result<f64> {
        let nn = Interval::from_u64(n);
        let mut acc = Interval::ZERO;
        for &(c, s) in &self.terms {
            acc = acc + c * nn.pow(-s)?;
        }
        Ok(acc.hi())
    }
}

/// One zeta factor removed from a product: residual factors are multiplied by
/// `(1 − p^{−s})^{e}` and the product by `ζ(s)^{e}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Peel {
    pub zeta_arg: Q64,
    pub exponent: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Acceleration {
    None,
    /// Peel leading terms while their exponent is below `target_decay`.
    Auto { max_depth: usize, target_decay: Q64 },
    Fixed(Vec<Peel>),
}

impl Acceleration {
    pub fn default_auto() -> Acceleration {
        Acceleration::Auto { max_depth: 6, target_decay: Q64::new(11, 5) }
    }
}

#[derive(Clone)]
pub struct PrimeTermSpec {
    pub name: String,
    pub term: TermFn,
    pub majorant: PowerMajorant,
    pub sign: TailSign,
    pub cache_key: Option<String>,
}

#[derive(Clone)]
pub struct PrimeFactorSpec {
    pub name: String,
    pub factor: TermFn,
    /// Majorant of `|residual(p) − 1|`.
    pub majorant: PowerMajorant,
    /// Sign of `residual(p) − 1` beyond the limit.
    pub sign: TailSign,
    pub acceleration: Vec<Peel>,
    pub zeta_cutoff: u64,
    pub cache_key: Option<String>,
}

fn cache() -> &'static Mutex<HashMap<String, Interval>> {
    static C: OnceLock<Mutex<HashMap<String, Interval>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: Option<String>, compute: impl FnOnce() -> Result<Interval>) -> Result<Interval> {
    if let Some(k) = &key {
        if let Some(v) = cache().lock().expect("cache").get(k) {
            return Ok(*v);
        }
    }
    let v = compute()?;
    if let Some(k) = key {
        cache().lock().expect("cache").insert(k, v);
    }
    Ok(v)
}

fn check_limit(prime_limit: u64) -> Result<()> {
    if prime_limit < 1000 {
        return Err(Error::DomainError(format!("prime limit {prime_limit} below 1000")));
    }
    Ok(())
}

fn majorant_violated(value: Interval, bound: Interval) -> bool {
    value.mig() > bound.hi()
}

/// Encloses `Σ_{p∤q} term(p)`.
pub fn certified_prime_sum(spec: &PrimeTermSpec, q: u64, prime_limit: u64) -> Result<Interval> {
    check_limit(prime_limit)?;
    let key = spec.cache_key.as_ref().map(|k| format!("sum|{k}|{q}|{prime_limit}"));
    cached(key, || {
        let maj = &spec.majorant;
        if maj.valid_from > prime_limit {
            return Err(Error::DomainError(format!("{}: majorant starts beyond the limit", spec.name)));
        }
        let tail = maj.tail_sum(prime_limit)?;
        let sieve = Sieve::new(prime_limit);
        let parts = sieve.map_prime_chunks(2, prime_limit + 1, |ps| {
            let mut s = Interval::ZERO;
            for &p in ps {
                if q % p == 0 {
                    continue;
                }
                let ctx = PrimeCtx::new(p);
                let t = (spec.term)(&ctx)?;
                if p >= maj.valid_from && majorant_violated(t, maj.at(&ctx)) {
                    return Err(Error::MajorantViolation { what: spec.name.clone(), prime: p });
                }
                s = s + t;
            }
            Ok(s)
        })?;
        let finite: Interval = parts.into_iter().sum();
        let t = tail.hi();
        let tail = match spec.sign {
            TailSign::Zero => Interval::ZERO,
            TailSign::Nonneg => Interval::new(0.0, t)?,
            TailSign::Nonpos => Interval::new(-t, 0.0)?,
            TailSign::Any => Interval::new(-t, t)?,
        };
        Ok(finite + tail)
    })
}

/// Encloses `Π_{p∤q} factor(p)`.
pub fn certified_prime_product(spec: &PrimeFactorSpec, q: u64, prime_limit: u64) -> Result<Interval> {
    check_limit(prime_limit)?;
    let key = spec.cache_key.as_ref().map(|k| format!("prod|{k}|{q}|{prime_limit}"));
    cached(key, || {
        let maj = &spec.majorant;
        if maj.valid_from > prime_limit {
            return Err(Error::DomainError(format!("{}: majorant starts beyond the limit", spec.name)));
        }
        let t = maj.tail_sum(prime_limit)?.hi();
        let m = maj.max_beyond(prime_limit)?;
        if m > 0.5 {
            return Err(Error::TailDiverges(format!("{}: factors beyond the limit not within 1/2 of 1", spec.name)));
        }
        let peels: Vec<(Interval, i32)> = spec.acceleration.iter().map(|pl| (q_interval(pl.zeta_arg), pl.exponent)).collect();
        let residual = |ctx: &PrimeCtx| -> Result<Interval> {
            let mut r = (spec.factor)(ctx)?;
            if r.lo() <= 0.0 {
                return Err(Error::NonPositiveFactor { what: spec.name.clone(), prime: ctx.p });
            }
            for &(s, e) in &peels {
                r = r * (Interval::ONE - ctx.pow_interval(-s)).powi(e)?;
            }
            Ok(r)
        };
        let sieve = Sieve::new(prime_limit);
        let parts = sieve.map_prime_chunks(2, prime_limit + 1, |ps| {
            let mut acc = Interval::ONE;
            for &p in ps {
                if q % p == 0 {
                    continue;
                }
                let ctx = PrimeCtx::new(p);
                let r = residual(&ctx)?;
                if p >= maj.valid_from && majorant_violated(r - Interval::ONE, maj.at(&ctx)) {
                    return Err(Error::MajorantViolation { what: spec.name.clone(), prime: p });
                }
                acc = acc * r;
            }
            Ok(acc)
        })?;
        let finite: Interval = parts.into_iter().product();
        let up = Interval::point(t).exp().hi();
        let down = (-(Interval::point(t) * Interval::point(1.0 + m))).exp().lo();
        let tail = match spec.sign {
            TailSign::Zero => Interval::ONE,
            TailSign::Nonneg => Interval::new(1.0, up)?,
            TailSign::Nonpos => Interval::new(down, 1.0)?,
            TailSign::Any => Interval::new(down, up)?,
        };
        let mut value = finite * tail;
        for pl in &spec.acceleration {
            let s = q_interval(pl.zeta_arg);
            let z = zeta_rigorous(s, spec.zeta_cutoff)?.value;
            value = value * z.powi(pl.exponent)?;
            for (p, _) in factorize(q).0 {
                let local = Interval::ONE - Interval::from_u64(p).pow(-s)?;
                value = value * local.powi(pl.exponent)?;
            }
        }
        Ok(value)
    })
}

fn u_max(valid_from: u64, m: i64) -> Result<f64> {
    Ok(Interval::from_u64(valid_from).pow(-Interval::ratio(1, m))?.hi())
}

fn majorant_from_urat(g: &URat, m: i64, u_max: f64, with_log: bool, valid_from: u64, what: &str) -> Result<(PowerMajorant, TailSign)> {
    if g.is_zero() {
        return Ok((PowerMajorant::zero(valid_from), TailSign::Zero));
    }
    let decay = Q64::new(g.shift, m);
    if decay <= Q64::from_integer(1) {
        return Err(Error::TailDiverges(format!("{what}: terms decay like p^-{decay}")));
    }
    let (c, sign) = g.sup_abs_ratio(u_max, SUP_PIECES)?;
    Ok((PowerMajorant::single(c, q_interval(decay), with_log, valid_from), sign))
}

fn f_closure(f: &FunctionSpec, expr: Expr, with_log: bool) -> TermFn {
    let f = f.clone();
    Arc::new(move |ctx: &PrimeCtx| {
        let v = expr.eval(ctx, f.f_at(ctx)?)?;
        Ok(if with_log { v * ctx.ln } else { v })
    })
}

fn valid_from(prime_limit: u64, p0: u64) -> u64 {
    CHECKPOINT.min(prime_limit).max(p0)
}

fn cache_key(f: Option<&FunctionSpec>, name: &str) -> Option<String> {
    match f {
        Some(f) if f.cacheable => Some(format!("{}|{name}", f.name)),
        Some(_) => None,
        None => Some(name.to_string()),
    }
}

/// `Σ log p · expr(p)` with a majorant certified from the exact expansion.
pub fn sum_spec_exact(name: &str, expr: Expr, f: Option<&FunctionSpec>, prime_limit: u64) -> Result<PrimeTermSpec> {
    let form = f.and_then(|f| f.exact.as_ref());
    let m = common_denominator(&[&expr], form, &[]);
    let vf = valid_from(prime_limit, 2);
    let um = u_max(vf, m)?;
    let h = expr.to_urat(m, form, um)?;
    let (majorant, sign) = majorant_from_urat(&h, m, um, true, vf, name)?;
    let term = match f {
        Some(f) => f_closure(f, expr, true),
        None => {
            let e = expr;
            Arc::new(move |ctx: &PrimeCtx| Ok(e.eval(ctx, Interval::ZERO)? * ctx.ln)) as TermFn
        }
    };
    Ok(PrimeTermSpec { name: name.to_string(), term, majorant, sign, cache_key: cache_key(f, name) })
}

/// Product of `expr(p)` with an exact expansion, optionally accelerated.
pub fn factor_spec_exact(
    name: &str,
    expr: Expr,
    f: Option<&FunctionSpec>,
    accel: &Acceleration,
    prime_limit: u64,
    zeta_cutoff: u64,
) -> Result<PrimeFactorSpec> {
    let form = f.and_then(|f| f.exact.as_ref());
    let extra: Vec<i64> = match accel {
        Acceleration::Fixed(ps) => ps.iter().map(|p| *p.zeta_arg.denom()).collect(),
        _ => Vec::new(),
    };
    let m = common_denominator(&[&expr], form, &extra);
    let vf = valid_from(prime_limit, 2);
    let um = u_max(vf, m)?;
    let mut r = expr.to_urat(m, form, um)?;
    let mut peels = Vec::new();
    match accel {
        Acceleration::None => {}
        Acceleration::Fixed(list) => {
            for pl in list {
                let k = pl.zeta_arg * Q64::from_integer(m);
                if pl.zeta_arg <= Q64::from_integer(1) {
                    return Err(Error::DomainError(format!("peeling needs zeta argument above 1, got {}", pl.zeta_arg)));
                }
                r = r.mul_one_minus_pow(k.to_integer() as u32, pl.exponent);
                peels.push(*pl);
            }
        }
        Acceleration::Auto { max_depth, target_decay } => {
            while peels.len() < *max_depth {
                let g = r.sub(&URat::one());
                if g.is_zero() {
                    break;
                }
                let s = Q64::new(g.shift, m);
                let lead = g.leading();
                if s >= *target_decay || s <= Q64::from_integer(1) || !lead.is_integer() {
                    break;
                }
                let e = match lead.to_integer().to_i32() {
                    Some(e) if e != 0 => e,
                    _ => break,
                };
                r = r.mul_one_minus_pow(g.shift as u32, e);
                peels.push(Peel { zeta_arg: s, exponent: e });
            }
        }
    }
    let g = r.sub(&URat::one());
    let (majorant, sign) = majorant_from_urat(&g, m, um, false, vf, name)?;
    let factor = match f {
        Some(f) => f_closure(f, expr, false),
        None => {
            let e = expr;
            Arc::new(move |ctx: &PrimeCtx| e.eval(ctx, Interval::ZERO)) as TermFn
        }
    };
    let key = cache_key(f, name).map(|k| format!("{k}|{peels:?}|{zeta_cutoff}"));
    Ok(PrimeFactorSpec {
        name: name.to_string(),
        factor,
        majorant,
        sign,
        acceleration: peels,
        zeta_cutoff,
        cache_key: key,
    })
}

/// Which Euler product of a function to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProductKind {
    /// `1 − (1 − f p^α)/p^{s+α} − f/p^{2s+α}` at `s = a + kα`.
    Signed { a: Q64, k: i64 },
    /// `1 + |1 − f p^α|/p^{α−δ} + |f|/p^{α−2δ}` at `s = −δ`.
    Absolute(Q64),
    /// `1 + |f p^α − 1|/(√p − 1)`.
    PAlpha,
    /// `1 − (p^{1−α} − f p + f)/p^{2−α}`.
    NAlpha,
}

/// Which prime sum of a function to build; every term carries `log p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SumKind {
    /// `(1 − (p−2)f)/((f+1)(p−1))`.
    T,
    /// `(1 − f p^α + 2f)/((f+1)(p^α − 1))`.
    LogDerivative,
    /// `(√p − (p−2)f)/((f+√p)(p−1))`.
    CriticalHalf,
}

fn p_alpha_plus(f: &FunctionSpec, a: Q64, k: i64) -> Expr {
    match f.alpha_exact {
        Some(al) => Expr::Pow(a + al * Q64::from_integer(k)),
        None => Expr::PowI(q_interval(a) + f.alpha * Interval::from_int(k)),
    }
}

fn one() -> Expr {
    Expr::int(1)
}

pub fn product_expr(f: &FunctionSpec, kind: ProductKind) -> Expr {
    let pa = p_alpha_plus(f, Q64::zero(), 1);
    match kind {
        ProductKind::Signed { a, k } => {
            one()
                - (one() - Expr::f() * pa) * p_alpha_plus(f, -a, -(k + 1))
                - Expr::f() * p_alpha_plus(f, -a * Q64::from_integer(2), -(2 * k + 1))
        }
        ProductKind::Absolute(d) => {
            one()
                + (one() - Expr::f() * pa).abs() * p_alpha_plus(f, d, -1)
                + Expr::f().abs() * p_alpha_plus(f, d * Q64::from_integer(2), -1)
        }
        ProductKind::PAlpha => one() + (Expr::f() * pa - one()).abs() / (Expr::p_pow(Q64::new(1, 2)) - one()),
        ProductKind::NAlpha => {
            one()
                - (p_alpha_plus(f, Q64::from_integer(1), -1) - Expr::f() * Expr::p() + Expr::f())
                    * p_alpha_plus(f, Q64::from_integer(-2), 1)
        }
    }
}

pub fn sum_expr(f: &FunctionSpec, kind: SumKind) -> Expr {
    let p = Expr::p;
    match kind {
        SumKind::T => {
            (one() - (p() - Expr::int(2)) * Expr::f()) / ((Expr::f() + one()) * (p() - one()))
        }
        SumKind::LogDerivative => {
            let pa = p_alpha_plus(f, Q64::zero(), 1);
            (one() - Expr::f() * pa.clone() + Expr::int(2) * Expr::f()) / ((Expr::f() + one()) * (pa - one()))
        }
        SumKind::CriticalHalf => {
            let sp = Expr::p_pow(Q64::new(1, 2));
            (sp.clone() - (p() - Expr::int(2)) * Expr::f()) / ((Expr::f() + sp) * (p() - one()))
        }
    }
}

enum Kind {
    Product(ProductKind),
    Sum(SumKind),
}

/// Majorants derived from the decay certificate alone, for functions
/// without an exact expansion. Returns `(terms, with_log)`.
fn certificate_majorant(f: &FunctionSpec, kind: Kind) -> Result<(Vec<(Interval, Interval)>, bool)> {
    let d = f.decay;
    let p0 = Interval::from_u64(d.p0);
    let sigma = d.s;
    let alpha = f.alpha;
    // |f(p) p^α| ≤ cf for p ≥ p0.
    let cf = Interval::ONE + d.c * p0.pow(-sigma)?;
    let low = |extra: Interval| -> Result<Interval> {
        let l = Interval::ONE - cf * p0.pow(-extra)?;
        if !l.is_positive() {
            return Err(Error::DomainError(format!("{}: p0 too small for a certificate majorant", f.name)));
        }
        Ok(l)
    };
    Ok(match kind {
        Kind::Product(ProductKind::Signed { a, k }) => {
            let s = q_interval(a) + alpha * Interval::from_int(k);
            (vec![(d.c, f.beta + s), (cf, Interval::point(2.0) * (s + alpha))], false)
        }
        Kind::Product(ProductKind::Absolute(dl)) => {
            let dl = q_interval(dl);
            (vec![(d.c, f.beta - dl), (cf, Interval::point(2.0) * (alpha - dl))], false)
        }
        Kind::Product(ProductKind::PAlpha) => {
            let k = (Interval::ONE - p0.pow(Interval::point(-0.5))?).recip()?;
            (vec![(d.c * k, sigma + Interval::point(0.5))], false)
        }
        Kind::Product(ProductKind::NAlpha) => (vec![(d.c, sigma + Interval::ONE), (cf, Interval::point(2.0))], false),
        Kind::Sum(SumKind::T) | Kind::Sum(SumKind::CriticalHalf) => {
            let shift = if matches!(kind, Kind::Sum(SumKind::T)) { Interval::ONE } else { Interval::point(0.5) };
            let k = p0 / (p0 - Interval::ONE) / low(shift)?;
            let two = Interval::point(2.0);
            (vec![(k * d.c, sigma + Interval::ONE), (k * two * cf, two)], true)
        }
        Kind::Sum(SumKind::LogDerivative) => {
            let k = (low(alpha)? * (Interval::ONE - p0.pow(-alpha)?)).recip()?;
            let two = Interval::point(2.0);
            (vec![(k * d.c, sigma + alpha), (k * two * cf, two * alpha)], true)
        }
    })
}

fn product_spec(f: &FunctionSpec, kind: ProductKind, accel: &Acceleration, prime_limit: u64, zeta_cutoff: u64) -> Result<PrimeFactorSpec> {
    let name = format!("{kind:?}");
    let expr = product_expr(f, kind);
    if f.has_exact_expansion() && expr.is_exact() {
        return factor_spec_exact(&name, expr, Some(f), accel, prime_limit, zeta_cutoff);
    }
    let (terms, _) = certificate_majorant(f, Kind::Product(kind))?;
    let vf = valid_from(prime_limit, f.decay.p0);
    Ok(PrimeFactorSpec {
        name,
        factor: f_closure(f, expr, false),
        majorant: PowerMajorant { terms, with_log: false, valid_from: vf },
        sign: if matches!(kind, ProductKind::Absolute(_) | ProductKind::PAlpha) { TailSign::Nonneg } else { TailSign::Any },
        acceleration: Vec::new(),
        zeta_cutoff,
        cache_key: None,
    })
}

fn sum_spec(f: &FunctionSpec, kind: SumKind, prime_limit: u64) -> Result<PrimeTermSpec> {
    let name = format!("{kind:?}");
    let expr = sum_expr(f, kind);
    if f.has_exact_expansion() && expr.is_exact() {
        return sum_spec_exact(&name, expr, Some(f), prime_limit);
    }
    let (terms, with_log) = certificate_majorant(f, Kind::Sum(kind))?;
    let vf = valid_from(prime_limit, f.decay.p0);
    Ok(PrimeTermSpec {
        name,
        term: f_closure(f, expr, true),
        majorant: PowerMajorant { terms, with_log, valid_from: vf },
        sign: TailSign::Any,
        cache_key: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HVariant {
    Signed,
    Absolute,
}

/// `H_f^q(s)` (signed) or `H̄_f^q(s)` (absolute values; `s = −δ`).
pub fn h_at(f: &FunctionSpec, q: u64, s: Q64, variant: HVariant, prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let kind = match variant {
        HVariant::Signed => ProductKind::Signed { a: s, k: 0 },
        HVariant::Absolute => ProductKind::Absolute(-s),
    };
    h_product(f, q, q_interval(s), kind, prime_limit, accel)
}

/// `H_f^q(1 − α)`, exact in α whenever α is rational.
pub fn h_at_one_minus_alpha(f: &FunctionSpec, q: u64, prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let kind = ProductKind::Signed { a: Q64::from_integer(1), k: -1 };
    h_product(f, q, Interval::ONE - f.alpha, kind, prime_limit, accel)
}

fn h_product(f: &FunctionSpec, q: u64, s: Interval, kind: ProductKind, prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let bound = (Interval::ONE - f.beta).max(&(Interval::point(0.5) - f.alpha));
    if bound.certainly_lt(&s) != Some(true) {
        return Err(Error::OutsideAnalyticDomain(format!("s = {s:?} not above max(1 - beta, 1/2 - alpha) = {bound:?}")));
    }
    let spec = product_spec(f, kind, accel, prime_limit, DEFAULT_ZETA_CUTOFF)?;
    certified_prime_product(&spec, q, prime_limit)
}

fn check_not_minus_one(f: &FunctionSpec, q: u64) -> Result<()> {
    for p in crate::primes::small_primes(1000) {
        if q % p == 0 {
            continue;
        }
        let v = f.f_at_prime(p)?;
        if v.contains(-1.0) {
            return Err(Error::DegenerateFunction(format!("{}: f({p}) may equal -1", f.name)));
        }
    }
    Ok(())
}

/// `T_f^q = Σ_{p∤q} log p (1 − (p−2)f(p))/((f(p)+1)(p−1))`.
pub fn t_f_q(f: &FunctionSpec, q: u64, prime_limit: u64) -> Result<Interval> {
    check_not_minus_one(f, q)?;
    let spec = sum_spec(f, SumKind::T, prime_limit).map_err(degenerate)?;
    certified_prime_sum(&spec, q, prime_limit).map_err(degenerate)
}

/// `Σ_{p∤q} log p (1 − f(p)p^α + 2f(p))/((f(p)+1)(p^α−1))`.
pub fn general_log_derivative(f: &FunctionSpec, q: u64, prime_limit: u64) -> Result<Interval> {
    check_not_minus_one(f, q)?;
    let spec = sum_spec(f, SumKind::LogDerivative, prime_limit).map_err(degenerate)?;
    certified_prime_sum(&spec, q, prime_limit).map_err(degenerate)
}

/// `Σ_{p∤q} log p (√p − (p−2)f(p))/((f(p)+√p)(p−1))`.
pub fn critical_half_sum(f: &FunctionSpec, q: u64, prime_limit: u64) -> Result<Interval> {
    let spec = sum_spec(f, SumKind::CriticalHalf, prime_limit)?;
    certified_prime_sum(&spec, q, prime_limit)
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::DomainError(m) if m.contains("division") => Error::DegenerateFunction(m),
        other => other,
    }
}

/// `P_α = Π_p (1 + |f(p)p^α − 1|/(√p − 1))` over all primes.
pub fn p_alpha_product(f: &FunctionSpec, prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let spec = product_spec(f, ProductKind::PAlpha, accel, prime_limit, DEFAULT_ZETA_CUTOFF)?;
    certified_prime_product(&spec, 1, prime_limit)
}

/// `N_α^q = Π_{p∤q} (1 − (p^{1−α} − f(p)p + f(p))/p^{2−α})`.
pub fn n_alpha_product(f: &FunctionSpec, q: u64, prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let spec = product_spec(f, ProductKind::NAlpha, accel, prime_limit, DEFAULT_ZETA_CUTOFF)?;
    certified_prime_product(&spec, q, prime_limit)
}

/// `p_α(q) = Π_{p|q} (1 + (1 − |i(p)|)/(√p − 1 + |i(p)|))` with `i(p) = f(p)p^α − 1`.
pub fn small_p_alpha(f: &FunctionSpec, q: u64) -> Result<Interval> {
    let mut acc = Interval::ONE;
    for (p, _) in factorize(q).0 {
        let ctx = PrimeCtx::new(p);
        let i = f.defect(&ctx)?;
        let sp = ctx.pi.sqrt()?;
        acc = acc * (Interval::ONE + (Interval::ONE - i) / (sp - Interval::ONE + i));
    }
    Ok(acc)
}

fn sum1_spec(prime_limit: u64) -> Result<PrimeTermSpec> {
    let e = one() / (Expr::p() * (Expr::p() - one()));
    sum_spec_exact("log p/(p(p-1))", e, None, prime_limit)
}

fn sum2_spec(prime_limit: u64) -> Result<PrimeTermSpec> {
    let e = Expr::int(2) / (Expr::p() * Expr::p() - one());
    sum_spec_exact("2 log p/(p^2-1)", e, None, prime_limit)
}

/// `Σ_p log p/(p(p−1))`.
pub fn sum_log_p_over_p_pminus1(prime_limit: u64) -> Result<Interval> {
    certified_prime_sum(&sum1_spec(prime_limit)?, 1, prime_limit)
}

/// `Σ_p 2 log p/(p²−1)`.
pub fn sum_2log_p_over_p2minus1(prime_limit: u64) -> Result<Interval> {
    certified_prime_sum(&sum2_spec(prime_limit)?, 1, prime_limit)
}

fn divisor_log_sum(q: u64, term: impl Fn(u64) -> Interval) -> Result<Interval> {
    if q == 0 {
        return Err(Error::DomainError("modulus must be positive".into()));
    }
    let mut acc = Interval::ZERO;
    for (p, _) in factorize(q).0 {
        acc = acc + Interval::from_u64(p).ln()? * term(p);
    }
    Ok(acc)
}

/// `(φ_α(q)/q^α) Σ_{p|q} log p/(p^α − 1)`, which equals
/// `−Σ_{d|q} μ(d) log d/d^α`.
pub fn coprime_log_derivative(q: u64, alpha: Interval) -> Result<Interval> {
    let mut s = Interval::ZERO;
    for (p, _) in factorize(q).0 {
        let pi = Interval::from_u64(p);
        s = s + pi.ln()? / (pi.pow(alpha)? - Interval::ONE);
    }
    Ok(phi_s(q, alpha)? / Interval::from_u64(q).pow(alpha)? * s)
}

/// `𝔞_q = Σ_p log p/(p(p−1)) + γ + Σ_{p|q} log p/p`.
pub fn mathfrak_a(q: u64, prime_limit: u64) -> Result<Interval> {
    let s = sum_log_p_over_p_pminus1(prime_limit)?;
    Ok(s + Interval::gamma() + divisor_log_sum(q, |p| Interval::from_u64(p).recip().expect("p > 0"))?)
}

/// `𝔟_q = Σ_p 2 log p/(p²−1) + γ + Σ_{p|q} log p/(p+1)`.
pub fn mathfrak_b(q: u64, prime_limit: u64) -> Result<Interval> {
    let s = sum_2log_p_over_p2minus1(prime_limit)?;
    Ok(s + Interval::gamma() + divisor_log_sum(q, |p| Interval::from_u64(p + 1).recip().expect("p > 0"))?)
}

/// `Π_p (1 + 1/((p−1)(√p−1)))`.
pub fn ramare_product(prime_limit: u64, accel: &Acceleration) -> Result<Interval> {
    let e = one() + one() / ((Expr::p() - one()) * (Expr::p_pow(Q64::new(1, 2)) - one()));
    let spec = factor_spec_exact("ramare", e, None, accel, prime_limit, DEFAULT_ZETA_CUTOFF)?;
    certified_prime_product(&spec, 1, prime_limit)
}

/// Shipped peeling schedule for the Ramaré product.
pub fn ramare_schedule() -> Acceleration {
    Acceleration::Fixed(vec![
        Peel { zeta_arg: Q64::new(3, 2), exponent: 1 },
        Peel { zeta_arg: Q64::from_integer(2), exponent: 1 },
    ])
}

fn finite_q_product(q: u64, factor: impl Fn(Interval) -> Result<Interval>) -> Result<Interval> {
    let mut acc = Interval::ONE;
    for (p, _) in factorize(q).0 {
        acc = acc * factor(Interval::from_u64(p))?;
    }
    Ok(acc)
}

/// `𝒜_q = Π_{p|q} (1 + (p − p^δ − 2)/((p−1)p^{1−δ} + p^δ + 1))`.
pub fn calligraphic_a(q: u64, delta: Q64) -> Result<Interval> {
    let d = q_interval(delta);
    finite_q_product(q, |p| {
        let pd = p.pow(d)?;
        let num = p - pd - Interval::point(2.0);
        let den = (p - Interval::ONE) * p.pow(Interval::ONE - d)? + pd + Interval::ONE;
        Ok(Interval::ONE + num / den)
    })
}

/// `ℬ_q = Π_{p|q} (1 + (p^{1−δ} − 1)/(p^{2−2δ} + 1))`.
pub fn calligraphic_b(q: u64, delta: Q64) -> Result<Interval> {
    let d = q_interval(delta);
    finite_q_product(q, |p| {
        let a = p.pow(Interval::ONE - d)?;
        Ok(Interval::ONE + (a - Interval::ONE) / (a.sqr() + Interval::ONE))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn sums_at_small_limit() {
        let s = sum_log_p_over_p_pminus1(100_000).unwrap();
        assert!(s.contains(0.7553666));
        let b1 = mathfrak_b(1, 100_000).unwrap();
        let b2 = mathfrak_b(2, 100_000).unwrap();
        let diff = b2 - b1 - Interval::ln2() / 3.0;
        assert!(diff.contains_zero());
    }

    #[test]
    fn one_over_p_h_at_zero() {
        let f = presets::one_over_p();
        let h = h_at(&f, 1, Q64::zero(), HVariant::Signed, 100_000, &Acceleration::default_auto()).unwrap();
        let six_over_pi2 = Interval::point(6.0) / Interval::pi().sqr();
        assert!(h.intersects(&six_over_pi2));
    }

    #[test]
    fn p_alpha_trivial_for_exact_power() {
        let f = presets::one_over_p();
        let p = p_alpha_product(&f, 10_000, &Acceleration::None).unwrap();
        assert!(p.contains(1.0) && p.width() < 1e-9);
    }

    #[test]
    fn a_two() {
        let a = calligraphic_a(2, Q64::new(1, 3)).unwrap();
        assert!((a.mid() - 0.672521).abs() < 1e-5);
    }
}
