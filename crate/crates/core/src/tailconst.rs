//! Constants Δ_α^δ making the partial sums of n^{−α} explicit for every X > 0,
//! including the empty range 0 < X < 1.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mainterm::{MainTermDescriptor, Shape};
use crate::zetapow::{zeta_rigorous, DEFAULT_ZETA_CUTOFF};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaConstant {
    pub alpha: Interval,
    pub delta: Interval,
    pub value: Interval,
}

fn is_exactly(x: Interval, v: f64) -> bool {
    x.is_point() && x.lo() == v
}

fn check_delta_range(alpha: Interval, delta: Interval) -> Result<()> {
    let zero = Interval::ZERO;
    let am1 = alpha - Interval::ONE;
    if !zero.lt(&delta, "0 < delta")? {
        return Err(Error::DeltaOutOfRange(format!("delta {delta:?} must be positive")));
    }
    if !am1.lt(&delta, "alpha - 1 < delta")? {
        return Err(Error::DeltaOutOfRange(format!("delta {delta:?} must exceed alpha - 1 = {am1:?}")));
    }
    if delta == alpha && delta.is_point() {
        return Ok(());
    }
    if !delta.le(&alpha, "delta <= alpha")? {
        return Err(Error::DeltaOutOfRange(format!("delta {delta:?} must not exceed alpha {alpha:?}")));
    }
    Ok(())
}

/// Δ_α^δ. For α = 1 this is `max{γ, 1/(δ e^{γδ+1})}`; otherwise the maximum
/// of `1`, the critical-point value and `ζ(α) − 1/(α−1)`, and `1` when δ = α.
pub fn delta_constant(alpha: Interval, delta: Interval) -> Result<DeltaConstant> {
    check_delta_range(alpha, delta)?;
    let value = if is_exactly(alpha, 1.0) {
        let g = Interval::gamma();
        let b = (delta * (g * delta + Interval::ONE).exp()).recip()?;
        g.max(&b)
    } else if alpha.contains(1.0) {
        return Err(Error::AmbiguousComparison(format!("alpha {alpha:?} overlaps 1")));
    } else if delta == alpha && delta.is_point() {
        Interval::ONE
    } else {
        let z = zeta_rigorous(alpha, DEFAULT_ZETA_CUTOFF)?.value;
        let am1 = alpha - Interval::ONE;
        let e = delta - alpha + Interval::ONE;
        let inner = (e / (z * am1).abs()).pow(e)?;
        let crit = (delta.pow(-delta)? * inner).pow(am1.recip()?)?;
        let pole = z - am1.recip()?;
        Interval::ONE.max(&crit).max(&pole)
    };
    Ok(DeltaConstant { alpha, delta, value })
}

/// Main term of Σ_{n≤X} n^{−α}: `log X + γ` for α = 1, otherwise
/// `ζ(α) − X^{1−α}/(α−1)`.
pub fn powersum_main(alpha: Interval) -> Result<MainTermDescriptor> {
    if is_exactly(alpha, 1.0) {
        return Ok(MainTermDescriptor::new()
            .with(Interval::ONE, Shape::LogX)
            .with(Interval::gamma(), Shape::Const));
    }
    let z = zeta_rigorous(alpha, DEFAULT_ZETA_CUTOFF)?.value;
    let am1 = alpha - Interval::ONE;
    Ok(MainTermDescriptor::new()
        .with(z, Shape::Const)
        .with(-(am1.recip()?), Shape::XPow { exponent: -am1 }))
}

/// The main term at `X` together with the bound `Δ_α^δ X^{−δ}` on the error.
pub fn powersum_estimate(x: f64, alpha: Interval, delta: Interval) -> Result<(Interval, Interval)> {
    if !(x > 0.0) {
        return Err(Error::DomainError(format!("X = {x} must be positive")));
    }
    let d = delta_constant(alpha, delta)?;
    let main = powersum_main(alpha)?.eval(Interval::point(x))?;
    let bound = d.value * Interval::point(x).pow(-delta)?;
    Ok((main, bound))
}

/// Whether `max{0, α−1} < δ < min{β−1, α−1/2}` holds.
pub fn validate_delta_for_theorem(alpha: Interval, beta: Interval, delta: Interval) -> Result<bool> {
    let half = Interval::point(0.5);
    let checks = [
        Interval::ZERO.lt(&delta, "0 < delta")?,
        (alpha - Interval::ONE).lt(&delta, "alpha - 1 < delta")?,
        delta.lt(&(beta - Interval::ONE), "delta < beta - 1")?,
        delta.lt(&(alpha - half), "delta < alpha - 1/2")?,
    ];
    Ok(checks.iter().all(|&c| c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Interval {
        Interval::ratio(n, d)
    }

    #[test]
    fn harmonic_constants() {
        let d = delta_constant(Interval::ONE, Interval::ONE).unwrap().value;
        assert!(d.intersects(&Interval::gamma()));
        let d = delta_constant(Interval::ONE, r(1, 3)).unwrap().value;
        assert!((d.mid() - 0.9105).abs() < 1e-4);
    }

    #[test]
    fn delta_equal_alpha() {
        let d = delta_constant(Interval::point(2.0), Interval::point(2.0)).unwrap();
        assert_eq!(d.value, Interval::ONE);
    }

    #[test]
    fn range_checks() {
        assert!(matches!(
            delta_constant(Interval::point(2.0), r(9, 10)),
            Err(Error::DeltaOutOfRange(_))
        ));
        assert!(validate_delta_for_theorem(Interval::ONE, Interval::point(2.0), r(1, 3)).unwrap());
        assert!(!validate_delta_for_theorem(Interval::ONE, Interval::point(2.0), Interval::point(0.5)).unwrap());
        assert!(!validate_delta_for_theorem(Interval::point(2.0), Interval::point(4.0), r(9, 10)).unwrap());
    }

    #[test]
    fn empty_range_example() {
        let (main, bound) = powersum_estimate(0.5, Interval::ONE, r(1, 3)).unwrap();
        assert!(main.abs().hi() <= bound.lo());
    }
}
