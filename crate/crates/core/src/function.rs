//! Square-free supported multiplicative functions described by their prime
//! values and a decay certificate.

use std::fmt;
use std::sync::Arc;

use num::rational::BigRational;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::primefn::{q_interval, ExactForm, PrimeCtx, Q64};
use crate::primes::small_primes;

pub type PrimeEvaluator = Arc<dyn Fn(&PrimeCtx) -> Interval + Send + Sync>;

/// `|f(p)p^α − 1| ≤ c·p^{−s}` for every prime `p ≥ p0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayCertificate {
    pub c: Interval,
    pub s: Interval,
    pub p0: u64,
}

#[derive(Clone)]
pub struct FunctionSpec {
    pub name: String,
    pub alpha: Interval,
    pub beta: Interval,
    /// Exact α when rational; required for exact tail expansions.
    pub alpha_exact: Option<Q64>,
    pub exact: Option<ExactForm>,
    pub evaluator: Option<PrimeEvaluator>,
    pub decay: DecayCertificate,
    /// Whether prime sums and products for this function may be memoized
    /// under its name.
    pub cacheable: bool,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("beta", &self.beta)
            .field("exact", &self.exact)
            .field("decay", &self.decay)
            .finish()
    }
}

impl FunctionSpec {
    /// A function with `f(p) = p^{−shift}·num(p)/den(p)` and rational α, β.
    pub fn exact(name: &str, alpha: Q64, beta: Q64, form: ExactForm, decay: DecayCertificate) -> FunctionSpec {
        FunctionSpec {
            name: name.to_string(),
            alpha: q_interval(alpha),
            beta: q_interval(beta),
            alpha_exact: Some(alpha),
            exact: Some(form),
            evaluator: None,
            decay,
            cacheable: false,
        }
    }

    /// A function known only through an interval evaluator at primes.
    pub fn custom(
        name: &str,
        alpha: Interval,
        beta: Interval,
        evaluator: PrimeEvaluator,
        decay: DecayCertificate,
    ) -> FunctionSpec {
        FunctionSpec {
            name: name.to_string(),
            alpha,
            beta,
            alpha_exact: None,
            exact: None,
            evaluator: Some(evaluator),
            decay,
            cacheable: false,
        }
    }

    pub fn has_exact_expansion(&self) -> bool {
        self.exact.is_some() && self.alpha_exact.is_some()
    }

    pub fn f_at(&self, ctx: &PrimeCtx) -> Result<Interval> {
        match (&self.exact, &self.evaluator) {
            (Some(e), _) => e.eval(ctx),
            (None, Some(ev)) => Ok(ev(ctx)),
            (None, None) => Err(Error::DegenerateFunction(format!("{} has no evaluator", self.name))),
        }
    }

    pub fn f_at_prime(&self, p: u64) -> Result<Interval> {
        self.f_at(&PrimeCtx::new(p))
    }

    pub fn f_exact(&self, p: u64) -> Option<BigRational> {
        self.exact.as_ref().and_then(|e| e.exact_value(p))
    }

    /// Whether α is an integer, so that `f(ℓ)` is rational for rational `f(p)`.
    pub fn alpha_is_integer(&self) -> bool {
        self.alpha_exact.map(|a| a.is_integer()).unwrap_or(false)
    }

    /// Exact `h_f^q(p^k)` for the convolution kernel with
    /// `ℓ^α μ²(ℓ)f(ℓ)1_q(ℓ) = Σ_{d|ℓ} h(d)1_q(ℓ/d)`: `h(p) = f(p)p^α − 1`,
    /// `h(p²) = −f(p)p^α`, zero on higher powers and on primes dividing `q`.
    pub fn kernel_exact(&self, p: u64, k: u32, q: u64) -> Option<BigRational> {
        use num::{One, Zero};
        if k == 0 {
            return Some(BigRational::one());
        }
        if q % p == 0 || k > 2 {
            return Some(BigRational::zero());
        }
        let a = self.alpha_exact.filter(|a| a.is_integer() && *a.numer() >= 0)?;
        let pa = num::BigInt::from(p).pow(*a.numer() as u32);
        let fp = self.f_exact(p)? * BigRational::from_integer(pa);
        Some(if k == 1 { fp - BigRational::one() } else { -fp })
    }

    /// `|f(p)p^α − 1|` at `p`.
    pub fn defect(&self, ctx: &PrimeCtx) -> Result<Interval> {
        let pa = match self.alpha_exact {
            Some(a) => ctx.pow(a),
            None => ctx.pow_interval(self.alpha),
        };
        Ok((self.f_at(ctx)? * pa - Interval::ONE).abs())
    }

    /// Checks the decay certificate at every prime in `[p0, upto]`.
    pub fn check_decay(&self, upto: u64) -> Result<()> {
        let d = self.decay;
        for p in small_primes(upto) {
            if p < d.p0 {
                continue;
            }
            let ctx = PrimeCtx::new(p);
            let bound = d.c * ctx.pow_interval(-d.s);
            if self.defect(&ctx)?.lo() > bound.hi() {
                return Err(Error::MajorantViolation { what: format!("decay of {}", self.name), prime: p });
            }
        }
        Ok(())
    }

    /// Structural requirements on α and β.
    pub fn check_shape(&self) -> Result<()> {
        if self.beta.certainly_le(&self.alpha) != Some(false) {
            return Err(Error::DomainError(format!("{}: beta must exceed alpha", self.name)));
        }
        let gap = self.beta - self.alpha;
        if !(self.decay.s.lo() <= gap.hi()) {
            return Err(Error::DomainError(format!("{}: decay exponent exceeds beta - alpha", self.name)));
        }
        Ok(())
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_exact.and_then(|a| a.to_f64()).unwrap_or(self.alpha.mid())
    }
}
