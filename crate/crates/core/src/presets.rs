//! Registered functions, addressable by name.

use num::Zero;

use crate::error::{Error, Result};
use crate::function::{DecayCertificate, FunctionSpec};
use crate::interval::Interval;
use crate::primefn::{q_interval, ExactForm, Q64};

pub const PRESET_NAMES: [&str; 4] = ["one_over_phi", "one_over_p", "unit", "one_over_p_alpha"];

fn exact_decay(s: Q64) -> DecayCertificate {
    DecayCertificate { c: Interval::ZERO, s: q_interval(s), p0: 2 }
}

/// `f(p) = 1/(p−1)`, α = 1, β = 2.
pub fn one_over_phi() -> FunctionSpec {
    let decay = DecayCertificate { c: Interval::point(2.0), s: Interval::ONE, p0: 2 };
    let mut f = FunctionSpec::exact(
        "one_over_phi",
        Q64::from_integer(1),
        Q64::from_integer(2),
        ExactForm::rational(vec![1], vec![-1, 1]),
        decay,
    );
    f.cacheable = true;
    f
}

/// `f(p) = 1/p`, α = 1.
pub fn one_over_p() -> FunctionSpec {
    let mut f = FunctionSpec::exact(
        "one_over_p",
        Q64::from_integer(1),
        Q64::from_integer(3),
        ExactForm::rational(vec![1], vec![0, 1]),
        exact_decay(Q64::from_integer(2)),
    );
    f.cacheable = true;
    f
}

/// `f(p) = 1`, α = 0.
pub fn unit() -> FunctionSpec {
    let mut f = FunctionSpec::exact(
        "unit",
        Q64::zero(),
        Q64::from_integer(2),
        ExactForm::rational(vec![1], vec![1]),
        exact_decay(Q64::from_integer(2)),
    );
    f.cacheable = true;
    f
}

/// `f(p) = p^{−α}` for rational α ≥ 0.
pub fn one_over_p_alpha(alpha: Q64) -> Result<FunctionSpec> {
    if alpha < Q64::zero() {
        return Err(Error::AlphaOutOfRange(format!("alpha = {alpha} must be non-negative")));
    }
    let beta = alpha + Q64::from_integer(2);
    let name = format!("one_over_p_alpha({alpha})");
    let mut f = FunctionSpec::exact(
        &name,
        alpha,
        beta,
        ExactForm { shift: alpha, num: vec![1], den: vec![1] },
        exact_decay(Q64::from_integer(2)),
    );
    f.cacheable = true;
    Ok(f)
}

/// Looks up a preset; `one_over_p_alpha` requires `alpha`.
pub fn preset(name: &str, alpha: Option<Q64>) -> Result<FunctionSpec> {
    match name {
        "one_over_phi" => Ok(one_over_phi()),
        "one_over_p" => Ok(one_over_p()),
        "unit" => Ok(unit()),
        "one_over_p_alpha" => {
            let a = alpha.ok_or_else(|| Error::DomainError("one_over_p_alpha needs --alpha".into()))?;
            one_over_p_alpha(a)
        }
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificates_hold() {
        for f in [one_over_phi(), one_over_p(), unit(), one_over_p_alpha(Q64::new(3, 2)).unwrap()] {
            f.check_shape().unwrap();
            f.check_decay(100_000).unwrap();
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(preset("nope", None), Err(Error::UnknownPreset(_))));
    }
}
