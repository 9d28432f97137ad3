//! Functions of a prime `p` built from rational constants, rational powers of
//! `p` and the prime values `f(p)`.
//!
//! An [`Expr`] is evaluated per prime with intervals. When every exponent is
//! rational and `f(p)` has an exact rational form, the same expression expands
//! into a rational function of `u = p^{-1/m}` with integer coefficients
//! ([`URat`]). That expansion certifies tail majorants for all large primes
//! and drives zeta peeling.

use std::collections::BTreeMap;
use std::ops;

use num::bigint::BigInt;
use num::integer::lcm;
use num::rational::{BigRational, Ratio};
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;

pub type Q64 = Ratio<i64>;

/// Per-prime values shared by every evaluation at that prime.
#[derive(Clone, Copy, Debug)]
pub struct PrimeCtx {
    pub p: u64,
    pub pi: Interval,
    pub ln: Interval,
}

impl PrimeCtx {
    pub fn new(p: u64) -> PrimeCtx {
        let pi = Interval::from_u64(p);
        PrimeCtx { p, pi, ln: pi.ln().expect("positive prime") }
    }

    /// `p^r` for rational `r`.
    pub fn pow(&self, r: Q64) -> Interval {
        let (n, d) = (*r.numer(), *r.denom());
        if d == 1 && n.abs() <= 64 {
            return self.pi.powi(n as i32).expect("positive prime");
        }
        if d == 2 && n.abs() == 1 {
            let s = self.pi.sqrt().expect("positive prime");
            return if n > 0 { s } else { s.recip().expect("positive") };
        }
        (self.ln * Interval::ratio(n, d)).exp()
    }

    pub fn pow_interval(&self, r: Interval) -> Interval {
        if r.is_point() && r.lo().fract() == 0.0 && r.lo().abs() <= 64.0 {
            return self.pi.powi(r.lo() as i32).expect("positive prime");
        }
        (self.ln * r).exp()
    }
}

/// Exact form `f(p) = p^{−shift} · num(p)/den(p)` with integer polynomials given
/// by ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactForm {
    pub shift: Q64,
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

fn poly_at_i128(c: &[i64], p: u64) -> Option<i128> {
    let mut acc: i128 = 0;
    for &a in c.iter().rev() {
        acc = acc.checked_mul(p as i128)?.checked_add(a as i128)?;
    }
    Some(acc)
}

fn interval_from_i128(v: i128) -> Interval {
    if v.unsigned_abs() < (1u128 << 53) {
        Interval::point(v as f64)
    } else {
        Interval::from_bigint(&BigInt::from(v))
    }
}

impl ExactForm {
    pub fn rational(num: Vec<i64>, den: Vec<i64>) -> ExactForm {
        ExactForm { shift: Q64::zero(), num, den }
    }

    pub fn eval(&self, ctx: &PrimeCtx) -> Result<Interval> {
        let n = poly_at_i128(&self.num, ctx.p).map(interval_from_i128);
        let d = poly_at_i128(&self.den, ctx.p).map(interval_from_i128);
        let (n, d) = match (n, d) {
            (Some(n), Some(d)) => (n, d),
            _ => {
                let r = self.rational_part(ctx.p);
                let v = Interval::from_ratio(&r);
                return Ok(v * ctx.pow(-self.shift));
            }
        };
        let q = n.checked_div(d).map_err(|_| Error::DegenerateFunction(format!("f has a pole at p = {}", ctx.p)))?;
        if self.shift.is_zero() {
            Ok(q)
        } else {
            Ok(q * ctx.pow(-self.shift))
        }
    }

    fn rational_part(&self, p: u64) -> BigRational {
        let pb = BigInt::from(p);
        let ev = |c: &[i64]| c.iter().rev().fold(BigInt::zero(), |acc, &a| acc * &pb + BigInt::from(a));
        BigRational::new(ev(&self.num), ev(&self.den))
    }

    /// `f(p)` as an exact rational when the shift is an integer.
    pub fn exact_value(&self, p: u64) -> Option<BigRational> {
        if !self.shift.is_integer() {
            return None;
        }
        let s = self.shift.to_integer();
        let pb = BigRational::from_integer(BigInt::from(p));
        let pw = num::pow(pb, s.unsigned_abs() as usize);
        let r = self.rational_part(p);
        Some(if s >= 0 { r / pw } else { r * pw })
    }
}

#[derive(Clone, Debug)]
pub enum Expr {
    Const(BigRational),
    /// `p^r`.
    Pow(Q64),
    /// `p^r` with an interval exponent; has no exact expansion.
    PowI(Interval),
    /// The prime value `f(p)`.
    F,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(BigRational::from_integer(n.into()))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Const(BigRational::new(n.into(), d.into()))
    }

    pub fn p() -> Expr {
        Expr::Pow(Q64::one())
    }

    pub fn p_pow(r: Q64) -> Expr {
        Expr::Pow(r)
    }

    pub fn f() -> Expr {
        Expr::F
    }

    pub fn abs(self) -> Expr {
        Expr::Abs(Box::new(self))
    }

    /// `p^a` for an exponent that is exact when `exact` is given.
    pub fn p_power(exact: Option<Q64>, approx: Interval) -> Expr {
        match exact {
            Some(r) => Expr::Pow(r),
            None => Expr::PowI(approx),
        }
    }

    pub fn eval(&self, ctx: &PrimeCtx, f: Interval) -> Result<Interval> {
        Ok(match self {
            Expr::Const(c) => Interval::from_ratio(c),
            Expr::Pow(r) => ctx.pow(*r),
            Expr::PowI(r) => ctx.pow_interval(*r),
            Expr::F => f,
            Expr::Add(a, b) => a.eval(ctx, f)? + b.eval(ctx, f)?,
            Expr::Sub(a, b) => a.eval(ctx, f)? - b.eval(ctx, f)?,
            Expr::Mul(a, b) => a.eval(ctx, f)? * b.eval(ctx, f)?,
            Expr::Div(a, b) => a.eval(ctx, f)?.checked_div(b.eval(ctx, f)?).map_err(|_| {
                Error::DomainError(format!("division by an enclosure of zero at p = {}", ctx.p))
            })?,
            Expr::Neg(a) => -a.eval(ctx, f)?,
            Expr::Abs(a) => a.eval(ctx, f)?.abs(),
        })
    }

    /// Denominators of all exponents, for choosing `m` in `u = p^{-1/m}`.
    pub fn exponent_denominators(&self, out: &mut Vec<i64>) {
        match self {
            Expr::Pow(r) => out.push(*r.denom()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.exponent_denominators(out);
                b.exponent_denominators(out);
            }
            Expr::Neg(a) | Expr::Abs(a) => a.exponent_denominators(out),
            _ => {}
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Expr::PowI(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_exact() && b.is_exact(),
            Expr::Neg(a) | Expr::Abs(a) => a.is_exact(),
            _ => true,
        }
    }

    /// Expands into a rational function of `u = p^{-1/m}`. Absolute values
    /// are resolved by certifying a constant sign for `0 < u ≤ u_max`.
    pub fn to_urat(&self, m: i64, f: Option<&ExactForm>, u_max: f64) -> Result<URat> {
        Ok(match self {
            Expr::Const(c) => URat::constant(c.clone()),
            Expr::Pow(r) => {
                let e = -*r * Q64::from_integer(m);
                if !e.is_integer() {
                    return Err(Error::DomainError(format!("exponent {r} not a multiple of 1/{m}")));
                }
                URat::monomial(e.to_integer())
            }
            Expr::PowI(_) => return Err(Error::DomainError("interval exponent has no exact expansion".into())),
            Expr::F => {
                let f = f.ok_or_else(|| Error::DomainError("f has no exact form".into()))?;
                URat::from_exact_form(f, m)?
            }
            Expr::Add(a, b) => a.to_urat(m, f, u_max)?.add(&b.to_urat(m, f, u_max)?),
            Expr::Sub(a, b) => a.to_urat(m, f, u_max)?.sub(&b.to_urat(m, f, u_max)?),
            Expr::Mul(a, b) => a.to_urat(m, f, u_max)?.mul(&b.to_urat(m, f, u_max)?),
            Expr::Div(a, b) => a.to_urat(m, f, u_max)?.div(&b.to_urat(m, f, u_max)?)?,
            Expr::Neg(a) => a.to_urat(m, f, u_max)?.neg(),
            Expr::Abs(a) => {
                let v = a.to_urat(m, f, u_max)?;
                match v.sign_on(u_max, 64)? {
                    TailSign::Zero | TailSign::Nonneg => v,
                    TailSign::Nonpos => v.neg(),
                    TailSign::Any => {
                        return Err(Error::DomainError("cannot certify the sign inside an absolute value".into()))
                    }
                }
            }
        })
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$v(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// Sparse polynomial in `u` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    c: BTreeMap<u32, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        Poly::monomial(0, c)
    }

    pub fn monomial(k: u32, c: BigInt) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.c.insert(k, c);
        }
        p
    }

    /// `1 − u^k`.
    pub fn one_minus(k: u32) -> Poly {
        Poly::one().sub(&Poly::monomial(k, BigInt::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: u32) -> BigInt {
        self.c.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.c.iter().map(|(&k, v)| (k, v))
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.c.keys().next().copied()
    }

    pub fn degree(&self) -> Option<u32> {
        self.c.keys().next_back().copied()
    }

    fn insert_add(&mut self, k: u32, v: BigInt) {
        let e = self.c.entry(k).or_default();
        *e += v;
        if e.is_zero() {
            self.c.remove(&k);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (&k, v) in &o.c {
            r.insert_add(k, v.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|(&k, v)| (k, -v)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (&i, a) in &self.c {
            for (&j, b) in &o.c {
                r.insert_add(i + j, a * b);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn shift_up(&self, k: u32) -> Poly {
        Poly { c: self.c.iter().map(|(&i, v)| (i + k, v.clone())).collect() }
    }

    pub fn shift_down(&self, k: u32) -> Poly {
        Poly { c: self.c.iter().map(|(&i, v)| (i - k, v.clone())).collect() }
    }

    /// Enclosure of the values on `u ∈ [a, b]` with `a ≥ 0`.
    pub fn eval_nonneg(&self, u: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for (&k, v) in &self.c {
            let ck = Interval::from_bigint(v);
            let uk = u.powi(k as i32).expect("finite power");
            acc = acc + ck * uk;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailSign {
    Zero,
    Nonneg,
    Nonpos,
    Any,
}

impl TailSign {
    fn of(x: Interval) -> TailSign {
        if x.lo() == 0.0 && x.hi() == 0.0 {
            TailSign::Zero
        } else if x.lo() >= 0.0 {
            TailSign::Nonneg
        } else if x.hi() <= 0.0 {
            TailSign::Nonpos
        } else {
            TailSign::Any
        }
    }

    fn join(self, o: TailSign) -> TailSign {
        use TailSign::*;
        match (self, o) {
            (Zero, x) | (x, Zero) => x,
            (a, b) if a == b => a,
            _ => Any,
        }
    }
}

/// `u^shift · num(u)/den(u)`, normalized so that `num(0) ≠ 0` and `den(0) ≠ 0`
/// unless the value is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct URat {
    pub num: Poly,
    pub den: Poly,
    pub shift: i64,
}

impl URat {
    pub fn zero() -> URat {
        URat { num: Poly::zero(), den: Poly::one(), shift: 0 }
    }

    pub fn one() -> URat {
        URat { num: Poly::one(), den: Poly::one(), shift: 0 }
    }

    pub fn constant(c: BigRational) -> URat {
        URat {
            num: Poly::constant(c.numer().clone()),
            den: Poly::constant(c.denom().clone()),
            shift: 0,
        }
        .normalized()
    }

    pub fn monomial(k: i64) -> URat {
        URat { num: Poly::one(), den: Poly::one(), shift: k }
    }

    /// `f(p)` as a function of `u`, where `p = u^{−m}`.
    pub fn from_exact_form(f: &ExactForm, m: i64) -> Result<URat> {
        let in_u = |c: &[i64]| -> (Poly, i64) {
            let d = c.iter().rposition(|&a| a != 0).unwrap_or(0);
            let mut p = Poly::zero();
            for (j, &a) in c.iter().enumerate().take(d + 1) {
                if a != 0 {
                    p.insert_add((m as u32) * (d - j) as u32, BigInt::from(a));
                }
            }
            (p, -(m * d as i64))
        };
        let (n, sn) = in_u(&f.num);
        let (d, sd) = in_u(&f.den);
        if d.is_zero() {
            return Err(Error::DegenerateFunction("zero denominator in f".into()));
        }
        let s = f.shift * Q64::from_integer(m);
        if !s.is_integer() {
            return Err(Error::DomainError(format!("shift of f not a multiple of 1/{m}")));
        }
        Ok(URat { num: n, den: d, shift: s.to_integer() + sn - sd }.normalized())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn normalized(mut self) -> URat {
        if self.num.is_zero() {
            return URat::zero();
        }
        let kn = self.num.low_degree().expect("nonzero");
        let kd = self.den.low_degree().expect("nonzero denominator");
        self.num = self.num.shift_down(kn);
        self.den = self.den.shift_down(kd);
        self.shift += kn as i64 - kd as i64;
        if self.den.coeff(0).is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        self
    }

    pub fn add(&self, o: &URat) -> URat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - s) as u32);
        let b = o.num.shift_up((o.shift - s) as u32);
        let r = if self.den == o.den {
            URat { num: a.add(&b), den: self.den.clone(), shift: s }
        } else {
            URat { num: a.mul(&o.den).add(&b.mul(&self.den)), den: self.den.mul(&o.den), shift: s }
        };
        r.normalized()
    }

    pub fn neg(&self) -> URat {
        URat { num: self.num.neg(), den: self.den.clone(), shift: self.shift }
    }

    pub fn sub(&self, o: &URat) -> URat {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &URat) -> URat {
        if self.is_zero() || o.is_zero() {
            return URat::zero();
        }
        URat { num: self.num.mul(&o.num), den: self.den.mul(&o.den), shift: self.shift + o.shift }.normalized()
    }

    pub fn div(&self, o: &URat) -> Result<URat> {
        if o.is_zero() {
            return Err(Error::DomainError("division by the zero function".into()));
        }
        Ok(URat { num: self.num.mul(&o.den), den: self.den.mul(&o.num), shift: self.shift - o.shift }.normalized())
    }

    /// Multiplies by `(1 − u^k)^e`.
    pub fn mul_one_minus_pow(&self, k: u32, e: i32) -> URat {
        let f = Poly::one_minus(k).pow(e.unsigned_abs());
        let r = if e >= 0 {
            URat { num: self.num.mul(&f), den: self.den.clone(), shift: self.shift }
        } else {
            URat { num: self.num.clone(), den: self.den.mul(&f), shift: self.shift }
        };
        r.normalized()
    }

    /// Leading coefficient `num(0)/den(0)`.
    pub fn leading(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(self.num.coeff(0), self.den.coeff(0))
    }

    /// Encloses `num/den` (without the `u^shift` factor) on `[0, u_max]`,
    /// split into `pieces` subintervals.
    pub fn ratio_enclosures(&self, u_max: f64, pieces: u32) -> Result<Vec<Interval>> {
        let mut out = Vec::with_capacity(pieces as usize);
        for i in 0..pieces {
            let a = Interval::point(u_max) * Interval::ratio(i as i64, pieces as i64);
            let b = Interval::point(u_max) * Interval::ratio(i as i64 + 1, pieces as i64);
            let piece = Interval::new(a.lo().max(0.0), b.hi())?;
            let n = self.num.eval_nonneg(piece);
            let d = self.den.eval_nonneg(piece);
            let q = n.checked_div(d).map_err(|_| {
                Error::DomainError("cannot certify a nonvanishing denominator near u = 0".into())
            })?;
            out.push(q);
        }
        Ok(out)
    }

    /// Certified sign of the function on `0 < u ≤ u_max`.
    pub fn sign_on(&self, u_max: f64, pieces: u32) -> Result<TailSign> {
        if self.is_zero() {
            return Ok(TailSign::Zero);
        }
        let mut s = TailSign::Zero;
        for q in self.ratio_enclosures(u_max, pieces)? {
            s = s.join(TailSign::of(q));
        }
        Ok(s)
    }

    /// `sup |num/den|` on `[0, u_max]` and the certified sign there.
    pub fn sup_abs_ratio(&self, u_max: f64, pieces: u32) -> Result<(Interval, TailSign)> {
        if self.is_zero() {
            return Ok((Interval::ZERO, TailSign::Zero));
        }
        let mut c = 0.0f64;
        let mut s = TailSign::Zero;
        for q in self.ratio_enclosures(u_max, pieces)? {
            c = c.max(q.mag());
            s = s.join(TailSign::of(q));
        }
        Ok((Interval::point(c), s))
    }
}

/// Least common multiple of the exponent denominators of `exprs`, of `f`'s
/// shift and of `extra`.
pub fn common_denominator(exprs: &[&Expr], f: Option<&ExactForm>, extra: &[i64]) -> i64 {
    let mut ds = extra.to_vec();
    for e in exprs {
        e.exponent_denominators(&mut ds);
    }
    if let Some(f) = f {
        ds.push(*f.shift.denom());
    }
    ds.into_iter().fold(1i64, lcm)
}

/// Converts a rational to `f64` bounds, for exponents used in majorants.
pub fn q_interval(r: Q64) -> Interval {
    Interval::ratio(*r.numer(), *r.denom())
}

pub fn q_to_f64(r: Q64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q64 {
        Q64::new(n, d)
    }

    #[test]
    fn ramare_factor_series() {
        // 1 + 1/((p−1)(√p−1)) with u = p^{-1/2}: the excess is u^3 + u^4 + 2u^5 + ...
        let e = Expr::int(1)
            + Expr::int(1) / ((Expr::p() - Expr::int(1)) * (Expr::p_pow(q(1, 2)) - Expr::int(1)));
        let r = e.to_urat(2, None, 0.01).unwrap();
        let g = r.sub(&URat::one());
        assert_eq!(g.shift, 3);
        assert_eq!(g.leading(), BigRational::one());
        let g2 = r.mul_one_minus_pow(3, 1).sub(&URat::one());
        assert_eq!(g2.shift, 4);
        assert_eq!(g2.leading(), BigRational::one());
        let g3 = r.mul_one_minus_pow(3, 1).mul_one_minus_pow(4, 1).sub(&URat::one());
        assert_eq!(g3.shift, 5);
    }

    #[test]
    fn exact_form_in_u() {
        let f = ExactForm::rational(vec![1], vec![-1, 1]);
        let u = URat::from_exact_form(&f, 3).unwrap();
        assert_eq!(u.shift, 3);
        let ctx = PrimeCtx::new(7);
        assert!(f.eval(&ctx).unwrap().contains_rational(&BigRational::new(1.into(), 6.into())));
        assert_eq!(f.exact_value(7), Some(BigRational::new(1.into(), 6.into())));
    }

    #[test]
    fn absolute_value_sign() {
        let f = ExactForm::rational(vec![1], vec![-1, 1]);
        let e = (Expr::int(1) - Expr::f() * Expr::p()).abs();
        let r = e.to_urat(1, Some(&f), 0.5).unwrap();
        assert_eq!(r.leading(), BigRational::one());
        assert_eq!(r.shift, 1);
    }
}
