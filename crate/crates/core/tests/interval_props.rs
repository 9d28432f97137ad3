use num::rational::BigRational;
use proptest::prelude::*;

use sfavg::interval::{decimal_bound, Direction};
use sfavg::Interval;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn interval() -> impl Strategy<Value = (Interval, f64)> {
    (-1e6f64..1e6, 0f64..10.0, 0f64..=1.0).prop_map(|(a, w, t)| {
        let x = Interval::new(a, a + w).unwrap();
        let m = (a + t * w).clamp(x.lo(), x.hi());
        (x, m)
    })
}

proptest! {
    #[test]
    fn field_operations_contain_exact_results((a, x) in interval(), (b, y) in interval()) {
        prop_assert!((a + b).contains_rational(&(rat(x) + rat(y))));
        prop_assert!((a - b).contains_rational(&(rat(x) - rat(y))));
        prop_assert!((a * b).contains_rational(&(rat(x) * rat(y))));
        if !b.contains(0.0) {
            prop_assert!((a / b).contains_rational(&(rat(x) / rat(y))));
        }
    }

    #[test]
    fn sqrt_brackets_squares(x in 0f64..1e12) {
        let s = Interval::point(x).sqrt().unwrap();
        prop_assert!(rat(s.lo()) * rat(s.lo()) <= rat(x));
        prop_assert!(rat(s.hi()) * rat(s.hi()) >= rat(x));
    }

    #[test]
    fn exp_and_ln_are_inverse(x in -30f64..30.0) {
        let back = Interval::point(x).exp().ln().unwrap();
        prop_assert!(back.contains(x));
    }

    #[test]
    fn decimal_bounds_bracket(x in -1e3f64..1e3, digits in 1u32..15) {
        let i = Interval::point(x);
        let lo: f64 = decimal_bound(i, digits, Direction::Lower).parse().unwrap();
        let hi: f64 = decimal_bound(i, digits, Direction::Upper).parse().unwrap();
        prop_assert!(lo <= x && x <= hi);
    }

    #[test]
    fn json_round_trip_keeps_containment((a, x) in interval()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: Interval = serde_json::from_str(&s).unwrap();
        prop_assert!(b.contains(x));
        prop_assert!(b.lo() <= a.lo() && b.hi() >= a.hi());
    }
}

#[test]
fn named_constants() {
    assert!(Interval::pi().contains(std::f64::consts::PI));
    assert!(Interval::gamma().contains(0.5772156649015329));
    assert!(Interval::pi().width() < 1e-15);
}
