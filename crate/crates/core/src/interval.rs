//! Closed real intervals with binary64 endpoints and outward rounding.
//!
//! Basic operations are rounded with error-free transformations: the exact
//! rounding error of `a + b`, `a * b`, `a / b` and `sqrt(a)` is recovered
//! (TwoSum, or a fused multiply-add residual) and an endpoint is moved by one
//! ulp only when the result was inexact in the wrong direction. Exact results
//! therefore stay exact, e.g. `[1,2] + [3,4] = [4,6]`. When the transform is not
//! exact (overflow, results near the subnormal range) the endpoint is nudged
//! unconditionally. `exp` and `ln` use the platform kernels widened by two ulps.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Results smaller than this are handled by plain nudging, since the residual
/// of an error-free transform may itself be rounded there.
const TINY: f64 = 1e-280;

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Elementary {
    Exp,
    Log,
    Sqrt,
    Pow(Interval),
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn add_rd(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        if a.is_finite() && b.is_finite() && s > 0.0 {
            return f64::MAX;
        }
        return s;
    }
    if e < 0.0 {
        down(s)
    } else {
        s
    }
}

fn add_ru(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        if a.is_finite() && b.is_finite() && s < 0.0 {
            return f64::MIN;
        }
        return s;
    }
    if e > 0.0 {
        up(s)
    } else {
        s
    }
}

fn mul_rd(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    if p.abs() < TINY {
        return down(p);
    }
    let e = a.mul_add(b, -p);
    if e < 0.0 {
        down(p)
    } else {
        p
    }
}

fn mul_ru(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p < 0.0 {
            return f64::MIN;
        }
        return p;
    }
    if p.abs() < TINY {
        return up(p);
    }
    let e = a.mul_add(b, -p);
    if e > 0.0 {
        up(p)
    } else {
        p
    }
}

/// Sign of the exact quotient minus the rounded one: +1, 0 or -1, or `None`
/// when the residual cannot be trusted.
fn div_residual_sign(a: f64, b: f64, q: f64) -> Option<i8> {
    if !q.is_finite() || q.abs() < TINY || !a.is_finite() || !b.is_finite() {
        return None;
    }
    if b.abs() > 1e300 || a.abs() < TINY {
        return None;
    }
    let r = (-q).mul_add(b, a);
    let s = if r == 0.0 {
        0
    } else if (r > 0.0) == (b > 0.0) {
        1
    } else {
        -1
    };
    Some(s)
}

fn div_rd(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if b.is_infinite() {
        return if (a > 0.0) == (b > 0.0) { 0.0 } else { -f64::MIN_POSITIVE };
    }
    let q = a / b;
    match div_residual_sign(a, b, q) {
        Some(s) if s < 0 => down(q),
        Some(_) => q,
        None => {
            if q.is_infinite() && q > 0.0 && a.is_finite() {
                f64::MAX
            } else {
                down(q)
            }
        }
    }
}

fn div_ru(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if b.is_infinite() {
        return if (a > 0.0) == (b > 0.0) { f64::MIN_POSITIVE } else { 0.0 };
    }
    let q = a / b;
    match div_residual_sign(a, b, q) {
        Some(s) if s > 0 => up(q),
        Some(_) => q,
        None => {
            if q.is_infinite() && q < 0.0 && a.is_finite() {
                f64::MIN
            } else {
                up(q)
            }
        }
    }
}

fn sqrt_rd(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::MAX;
    }
    let s = x.sqrt();
    if x < TINY {
        return down(s).max(0.0);
    }
    let r = (-s).mul_add(s, x);
    if r < 0.0 {
        down(s)
    } else {
        s
    }
}

fn sqrt_ru(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return x;
    }
    let s = x.sqrt();
    if x < TINY {
        return up(s);
    }
    let r = (-s).mul_add(s, x);
    if r > 0.0 {
        up(s)
    } else {
        s
    }
}

fn widen_down(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = down(y);
    }
    y
}

fn widen_up(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = up(y);
    }
    y
}

/// Largest binary64 value not above the exact rational `r`.
pub fn rational_floor_f64(r: &BigRational) -> f64 {
    let mut c = r.to_f64().unwrap_or(f64::NAN);
    if c.is_nan() {
        c = if r.is_negative() { f64::MIN } else { f64::MAX };
    }
    if c == f64::NEG_INFINITY {
        return c;
    }
    if c == f64::INFINITY {
        c = f64::MAX;
    }
    loop {
        let cr = BigRational::from_float(c).expect("finite");
        if &cr <= r {
            let n = up(c);
            if n.is_finite() && &BigRational::from_float(n).expect("finite") <= r {
                c = n;
                continue;
            }
            return c;
        }
        c = down(c);
        if c.is_infinite() {
            return c;
        }
    }
}

/// Encloses `n/d` for `d > 0`, truncating huge operands to their top bits.
pub fn fraction_enclosure(n: &BigInt, d: &BigInt) -> Interval {
    if n.is_negative() {
        return -fraction_enclosure(&-n, d);
    }
    let bits = d.bits();
    if bits <= 900 {
        return Interval::from_ratio(&BigRational::new(n.clone(), d.clone()));
    }
    let k = bits - 120;
    let nt = n >> k;
    let dt = d >> k;
    // n/d lies between nt/(dt+1) and (nt+1)/dt for n ≥ 0.
    let lo = Interval::from_bigint(&nt) / Interval::from_bigint(&(&dt + 1));
    let hi = Interval::from_bigint(&(&nt + 1)) / Interval::from_bigint(&dt);
    lo.hull(&hi)
}

/// Smallest binary64 value not below the exact rational `r`.
pub fn rational_ceil_f64(r: &BigRational) -> f64 {
    -rational_floor_f64(&-r)
}

/// Parses a decimal literal (`-1.25e-3`), an integer, or a fraction `a/b`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedInterval(format!("cannot parse number {s:?}"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(n * num::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Parses `lo` and `hi` literals and returns an interval containing `[lo, hi]`.
pub fn make_interval(lo: &str, hi: &str) -> Result<Interval> {
    let l = parse_rational(lo)?;
    let h = parse_rational(hi)?;
    if l > h {
        return Err(Error::MalformedInterval(format!("{lo} > {hi}")));
    }
    Ok(Interval { lo: rational_floor_f64(&l), hi: rational_ceil_f64(&h) })
}

pub fn arithmetic(a: Interval, b: Interval, kind: ArithKind) -> Result<Interval> {
    Ok(match kind {
        ArithKind::Add => a + b,
        ArithKind::Sub => a - b,
        ArithKind::Mul => a * b,
        ArithKind::Div => a.checked_div(b)?,
    })
}

pub fn elementary(x: Interval, f: Elementary) -> Result<Interval> {
    match f {
        Elementary::Exp => Ok(x.exp()),
        Elementary::Log => x.ln(),
        Elementary::Sqrt => x.sqrt(),
        Elementary::Pow(r) => x.pow(r),
    }
}

/// Renders a `digits`-decimal string that bounds `x` from above or below.
///
/// Any number of digits is accepted; the value is computed exactly from the
/// binary endpoint so the result never narrows the interval.
pub fn decimal_bound(x: Interval, digits: u32, direction: Direction) -> String {
    let v = match direction {
        Direction::Upper => x.hi,
        Direction::Lower => x.lo,
    };
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = BigRational::from_float(v).expect("finite endpoint");
    let scale = num::pow(BigInt::from(10u32), digits as usize);
    let scaled = r * BigRational::from_integer(scale.clone());
    let n = match direction {
        Direction::Upper => scaled.ceil().to_integer(),
        Direction::Lower => scaled.floor().to_integer(),
    };
    format_scaled(&n, digits, &scale)
}

fn format_scaled(n: &BigInt, digits: u32, scale: &BigInt) -> String {
    let sign = if n.is_negative() { "-" } else { "" };
    let a = n.abs();
    let int = &a / scale;
    let frac = &a % scale;
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]` from machine numbers.
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::MalformedInterval(format!("[{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Interval {
        assert!(!x.is_nan(), "NaN is not a valid endpoint");
        Interval { lo: x, hi: x }
    }

    pub fn from_int(n: i64) -> Interval {
        let f = n as f64;
        if f as i128 == n as i128 {
            Interval::point(f)
        } else {
            Interval { lo: down(f), hi: up(f) }
        }
    }

    pub fn from_u64(n: u64) -> Interval {
        let f = n as f64;
        if f as u128 == n as u128 {
            Interval::point(f)
        } else {
            Interval { lo: down(f), hi: up(f) }
        }
    }

    pub fn from_ratio(r: &BigRational) -> Interval {
        Interval { lo: rational_floor_f64(r), hi: rational_ceil_f64(r) }
    }

    pub fn from_bigint(n: &BigInt) -> Interval {
        Interval::from_ratio(&BigRational::from_integer(n.clone()))
    }

    /// The rational `num/den`.
    pub fn ratio(num: i64, den: i64) -> Interval {
        assert!(den != 0, "zero denominator");
        Interval::from_ratio(&BigRational::new(num.into(), den.into()))
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        add_ru(self.hi, -self.lo)
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return if self.lo.is_infinite() { self.hi } else { self.lo };
        }
        self.lo / 2.0 + self.hi / 2.0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        if self.lo.is_finite() && BigRational::from_float(self.lo).expect("finite") > *r {
            return false;
        }
        if self.hi.is_finite() && BigRational::from_float(self.hi).expect("finite") < *r {
            return false;
        }
        true
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Largest absolute value of an element.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value of an element.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn abs(&self) -> Interval {
        Interval { lo: self.mig(), hi: self.mag() }
    }

    /// Enclosure of `{max(x, y) : x ∈ self, y ∈ other}`.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Widens both endpoints outward by `eps` (rounded outward).
    pub fn inflate(&self, eps: f64) -> Interval {
        Interval { lo: add_rd(self.lo, -eps), hi: add_ru(self.hi, eps) }
    }

    /// Certified `self < other`: `Some(true)` if every element is smaller,
    /// `Some(false)` if no element can be smaller, `None` otherwise.
    pub fn certainly_lt(&self, other: &Interval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self <= other`.
    pub fn certainly_le(&self, other: &Interval) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn lt(&self, other: &Interval, what: &str) -> Result<bool> {
        self.certainly_lt(other).ok_or_else(|| Error::AmbiguousComparison(what.to_string()))
    }

    pub fn le(&self, other: &Interval, what: &str) -> Result<bool> {
        self.certainly_le(other).ok_or_else(|| Error::AmbiguousComparison(what.to_string()))
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZeroInterval);
        }
        let (a, b) = (self, rhs);
        let c = [div_rd(a.lo, b.lo), div_rd(a.lo, b.hi), div_rd(a.hi, b.lo), div_rd(a.hi, b.hi)];
        let d = [div_ru(a.lo, b.lo), div_ru(a.lo, b.hi), div_ru(a.hi, b.lo), div_ru(a.hi, b.hi)];
        Ok(Interval {
            lo: c.iter().copied().fold(f64::INFINITY, f64::min),
            hi: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn recip(self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    pub fn sqr(self) -> Interval {
        let a = self.abs();
        Interval { lo: mul_rd(a.lo, a.lo), hi: mul_ru(a.hi, a.hi) }
    }

    pub fn sqrt(self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::DomainError(format!("sqrt of {self:?}")));
        }
        Ok(Interval { lo: sqrt_rd(self.lo), hi: sqrt_ru(self.hi) })
    }

    pub fn exp(self) -> Interval {
        let lo = if self.lo == 0.0 {
            1.0
        } else {
            widen_down(self.lo.exp(), 2).max(0.0)
        };
        let hi = if self.hi == 0.0 {
            1.0
        } else {
            let e = self.hi.exp();
            if e.is_infinite() {
                e
            } else {
                widen_up(e, 2)
            }
        };
        Interval { lo, hi }
    }

    pub fn ln(self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(Error::DomainError(format!("log of {self:?}")));
        }
        let f = |x: f64, d: bool| {
            if x == 1.0 {
                0.0
            } else if x.is_infinite() {
                x
            } else if d {
                widen_down(x.ln(), 2)
            } else {
                widen_up(x.ln(), 2)
            }
        };
        Ok(Interval { lo: f(self.lo, true), hi: f(self.hi, false) })
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: i32) -> Result<Interval> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        if n == 0 {
            return Ok(Interval::ONE);
        }
        let base = if n % 2 == 0 { self.abs() } else { self };
        let mut result = Interval::ONE;
        let mut b = base;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * b;
            }
            e >>= 1;
            if e > 0 {
                b = if b.lo >= 0.0 { b * b } else { b.sqr() };
            }
        }
        Ok(result)
    }

    /// `self^r`. Point integer exponents with `|r| <= 64` use `powi`; other
    /// exponents require a positive base and use `exp(r log x)`.
    pub fn pow(self, r: Interval) -> Result<Interval> {
        if r.is_point() && r.lo.fract() == 0.0 && r.lo.abs() <= 64.0 {
            return self.powi(r.lo as i32);
        }
        if self.lo <= 0.0 {
            if self.lo == 0.0 && r.lo > 0.0 {
                let hi = if self.hi == 0.0 { Interval::ZERO } else { (Interval::point(self.hi).ln()? * r).exp() };
                return Ok(Interval { lo: 0.0, hi: hi.hi });
            }
            return Err(Error::DomainError(format!("pow of {self:?} to {r:?}")));
        }
        Ok((self.ln()? * r).exp())
    }

    pub fn pow_ratio(self, num: i64, den: i64) -> Result<Interval> {
        if den == 1 || num % den == 0 {
            return self.powi((num / den) as i32);
        }
        if den == 2 && num == 1 {
            return self.sqrt();
        }
        self.pow(Interval::ratio(num, den))
    }

    pub fn pi() -> Interval {
        static PI: OnceLock<Interval> = OnceLock::new();
        *PI.get_or_init(|| {
            make_interval(
                "3.141592653589793238462643383279502884197",
                "3.141592653589793238462643383279502884198",
            )
            .expect("valid literal")
        })
    }

    /// Euler's constant.
    pub fn gamma() -> Interval {
        GAMMA.value()
    }

    pub fn e() -> Interval {
        static E: OnceLock<Interval> = OnceLock::new();
        *E.get_or_init(|| {
            make_interval(
                "2.718281828459045235360287471352662497757",
                "2.718281828459045235360287471352662497758",
            )
            .expect("valid literal")
        })
    }

    pub fn ln2() -> Interval {
        static L: OnceLock<Interval> = OnceLock::new();
        *L.get_or_init(|| {
            make_interval(
                "0.6931471805599453094172321214581765680755",
                "0.6931471805599453094172321214581765680756",
            )
            .expect("valid literal")
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NamedConstant {
    pub name: &'static str,
    pub decimal_lo: &'static str,
    pub decimal_hi: &'static str,
    pub provenance: &'static str,
}

impl NamedConstant {
    pub fn value(&self) -> Interval {
        make_interval(self.decimal_lo, self.decimal_hi).expect("catalogued constant literal")
    }
}

pub const GAMMA: NamedConstant = NamedConstant {
    name: "gamma",
    decimal_lo: "0.5772156649015328606065120900824024310421",
    decimal_hi: "0.5772156649015328606065120900824024310422",
    provenance: "Euler's constant to 40 decimals",
};

pub const PI: NamedConstant = NamedConstant {
    name: "pi",
    decimal_lo: "3.141592653589793238462643383279502884197",
    decimal_hi: "3.141592653589793238462643383279502884198",
    provenance: "pi to 39 decimals",
};

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_rd(self.lo, rhs.lo), hi: add_ru(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: add_rd(self.lo, -rhs.hi), hi: add_ru(self.hi, -rhs.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b) = (self, rhs);
        if a.lo >= 0.0 && b.lo >= 0.0 {
            return Interval { lo: mul_rd(a.lo, b.lo), hi: mul_ru(a.hi, b.hi) };
        }
        let lo = mul_rd(a.lo, b.lo).min(mul_rd(a.lo, b.hi)).min(mul_rd(a.hi, b.lo)).min(mul_rd(a.hi, b.hi));
        let hi = mul_ru(a.lo, b.lo).max(mul_ru(a.lo, b.hi)).max(mul_ru(a.hi, b.lo)).max(mul_ru(a.hi, b.hi));
        Interval { lo, hi }
    }
}

/// Panics when the divisor contains zero; use [`Interval::checked_div`] where
/// that can happen.
impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        self.checked_div(rhs).expect("interval division by an interval containing zero")
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Div<f64> for Interval {
    type Output = Interval;
    fn div(self, rhs: f64) -> Interval {
        self / Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Interval {
        Interval::point(x)
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl std::iter::Product for Interval {
    fn product<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ONE, |a, b| a * b)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(6) as u32;
        write!(
            f,
            "[{}, {}]",
            decimal_bound(*self, d, Direction::Lower),
            decimal_bound(*self, d, Direction::Upper)
        )
    }
}

impl FromStr for Interval {
    type Err = Error;

    /// Accepts `[lo, hi]` or a single literal.
    fn from_str(s: &str) -> Result<Interval> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| Error::MalformedInterval(s.to_string()))?;
            make_interval(lo, hi)
        } else {
            make_interval(t, t)
        }
    }
}

fn endpoint_from_str(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => Err(Error::MalformedInterval(s.to_string())),
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &decimal_bound(*self, 17, Direction::Lower))?;
        st.serialize_field("hi", &decimal_bound(*self, 17, Direction::Upper))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Interval, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let lo = match endpoint_from_str(&raw.lo) {
            Ok(v) => v,
            Err(_) => rational_floor_f64(&parse_rational(&raw.lo).map_err(de::Error::custom)?),
        };
        let hi = match endpoint_from_str(&raw.hi) {
            Ok(v) => v,
            Err(_) => rational_ceil_f64(&parse_rational(&raw.hi).map_err(de::Error::custom)?),
        };
        Interval::new(lo, hi).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn literals_round_outward() {
        let g = make_interval("0.5772156649015328", "0.5772156649015329").unwrap();
        assert!(g.contains_interval(&Interval::gamma()) || g.intersects(&Interval::gamma()));
        assert_eq!(make_interval("1", "1").unwrap(), Interval::ONE);
        let t = make_interval("0.1", "0.1").unwrap();
        assert!(t.lo() < t.hi());
        assert!(t.contains_rational(&q(1, 10)));
        assert!(matches!(make_interval("2", "1"), Err(Error::MalformedInterval(_))));
        assert!(make_interval("1/3", "1/3").unwrap().contains_rational(&q(1, 3)));
        assert!(make_interval("-1.5e-3", "2E2").unwrap().contains_rational(&q(-3, 2000)));
    }

    #[test]
    fn basic_arithmetic() {
        let a = Interval::new(1.0, 2.0).unwrap();
        let b = Interval::new(3.0, 4.0).unwrap();
        assert_eq!(a + b, Interval::new(4.0, 6.0).unwrap());
        let c = Interval::new(-1.0, 2.0).unwrap();
        assert_eq!(c * b, Interval::new(-4.0, 8.0).unwrap());
        let third = Interval::ONE / Interval::point(3.0);
        assert!(third.lo() <= 1.0 / 3.0 && third.lo() < third.hi());
        assert!(third.contains_rational(&q(1, 3)));
        assert_eq!(arithmetic(a, c, ArithKind::Div), Err(Error::DivisionByZeroInterval));
    }

    #[test]
    fn elementary_functions() {
        assert!(Interval::ONE.exp().intersects(&Interval::e()));
        assert!(Interval::ONE.exp().contains(std::f64::consts::E));
        let s = Interval::new(4.0, 9.0).unwrap().sqrt().unwrap();
        assert_eq!(s, Interval::new(2.0, 3.0).unwrap());
        let p = Interval::point(2.0).pow(Interval::point(1.5)).unwrap();
        assert!(p.contains(2.0f64.powf(1.5)));
        assert!(p.width() < 1e-14);
        assert!(Interval::new(-1.0, 2.0).unwrap().ln().is_err());
        assert!(Interval::point(-2.0).pow(Interval::point(0.5)).is_err());
        assert_eq!(Interval::new(-1.0, 2.0).unwrap().powi(2).unwrap(), Interval::new(0.0, 4.0).unwrap());
        assert_eq!(Interval::point(3.0).powi(-2).unwrap().recip().unwrap().mid().round(), 9.0);
    }

    #[test]
    fn decimal_bounds() {
        assert_eq!(decimal_bound(Interval::gamma(), 3, Direction::Upper), "0.578");
        let x = make_interval("1.0438", "1.0439").unwrap();
        assert_eq!(decimal_bound(x, 3, Direction::Upper), "1.044");
        let y = make_interval("9.37522", "9.37531").unwrap();
        assert_eq!(decimal_bound(y, 4, Direction::Lower), "9.3752");
        let n = make_interval("-0.1159", "-0.1159").unwrap();
        assert_eq!(decimal_bound(n, 3, Direction::Upper), "-0.115");
        assert_eq!(decimal_bound(n, 3, Direction::Lower), "-0.116");
    }

    #[test]
    fn certified_comparisons() {
        let a = Interval::new(1.0, 2.0).unwrap();
        let b = Interval::new(3.0, 4.0).unwrap();
        assert_eq!(a.certainly_lt(&b), Some(true));
        assert_eq!(b.certainly_lt(&a), Some(false));
        assert_eq!(a.certainly_lt(&Interval::new(1.5, 3.0).unwrap()), None);
        assert_eq!(Interval::ONE.certainly_lt(&Interval::ONE), Some(false));
        assert_eq!(Interval::ONE.certainly_le(&Interval::ONE), Some(true));
    }

    #[test]
    fn serde_round_trip_is_outward() {
        let x = Interval::ONE / Interval::point(3.0);
        let json = serde_json::to_string(&x).unwrap();
        assert!(json.contains("\"lo\":\"0.33333333333333331\""));
        let back: Interval = serde_json::from_str(&json).unwrap();
        assert!(back.contains_interval(&x));
    }
}
