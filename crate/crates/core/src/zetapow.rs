//! Rigorous values of ζ(α) for real α > 0, α ≠ 1, from the partial sum
//! Σ_{n≤N} n^{−α} plus the enclosure `N^{1−α}/(α−1) ± N^{−α}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::interval::Interval;

pub const DEFAULT_ZETA_CUTOFF: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaValue {
    pub alpha: Interval,
    pub value: Interval,
    pub cutoff_n: u64,
}

/// `n^{−α}` for a positive integer `n`.
pub fn inv_power(n: u64, alpha: Interval) -> Interval {
    if n == 1 {
        return Interval::ONE;
    }
    let x = Interval::from_u64(n);
    if alpha.is_point() && alpha.lo().fract() == 0.0 && alpha.lo().abs() <= 64.0 {
        let k = alpha.lo() as i32;
        return x.powi(k).and_then(|v| v.recip()).expect("positive base");
    }
    let l = x.ln().expect("positive base");
    (-(l * alpha)).exp()
}

/// Σ_{n≤⌊X⌋} n^{−α}, accumulated in ascending order; zero when X < 1.
pub fn partial_power_sum(x: f64, alpha: Interval) -> Interval {
    if x.is_nan() || x < 1.0 {
        return Interval::ZERO;
    }
    let n = x.floor() as u64;
    let mut s = Interval::ZERO;
    for k in 1..=n {
        s = s + inv_power(k, alpha);
    }
    s
}

fn cache() -> &'static Mutex<HashMap<(u64, u64, u64), ZetaValue>> {
    static C: OnceLock<Mutex<HashMap<(u64, u64, u64), ZetaValue>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Encloses ζ(α) using `N` explicit terms. Results are memoized per (α, N).
pub fn zeta_rigorous(alpha: Interval, n: u64) -> Result<ZetaValue> {
    if alpha.lo() <= 0.0 {
        return Err(Error::DomainError(format!("zeta argument {alpha:?} must be positive")));
    }
    if alpha.contains(1.0) {
        return Err(Error::PoleAtOne);
    }
    if n < 2 {
        return Err(Error::DomainError("zeta cutoff must be at least 2".into()));
    }
    let key = (alpha.lo().to_bits(), alpha.hi().to_bits(), n);
    if let Some(v) = cache().lock().expect("zeta cache").get(&key) {
        return Ok(*v);
    }
    let head = partial_power_sum(n as f64, alpha);
    let nn = Interval::from_u64(n);
    let am1 = alpha - Interval::ONE;
    let pole = nn.pow(-am1)? / am1;
    let r = inv_power(n, alpha).hi();
    let value = head + pole + Interval::new(-r, r)?;
    let z = ZetaValue { alpha, value, cutoff_n: n };
    cache().lock().expect("zeta cache").insert(key, z);
    Ok(z)
}

pub fn zeta(alpha: Interval) -> Result<Interval> {
    Ok(zeta_rigorous(alpha, DEFAULT_ZETA_CUTOFF)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_partial_sum() {
        let s = partial_power_sum(10.0, Interval::ONE);
        assert!(s.contains(7381.0 / 2520.0));
        assert_eq!(partial_power_sum(0.5, Interval::point(3.0)), Interval::ZERO);
    }

    #[test]
    fn even_values() {
        let pi = Interval::pi();
        let z2 = zeta_rigorous(Interval::point(2.0), 1_000_000).unwrap().value;
        assert!(z2.intersects(&(pi.sqr() / 6.0)));
        let z4 = zeta_rigorous(Interval::point(4.0), 1_000_000).unwrap().value;
        assert!(z4.intersects(&(pi.powi(4).unwrap() / 90.0)));
        assert!(z2.width() < 1e-9);
    }

    #[test]
    fn pole_is_rejected() {
        assert_eq!(zeta_rigorous(Interval::new(0.9, 1.1).unwrap(), 100), Err(Error::PoleAtOne));
    }
}
