//! Named certified constants.

use sfavg::estimator::{consequences_constants, convolution_estimate, critical_constants, e_alpha_v, squarefree_count_bound, Config, C2_SEARCH_MAX};
use sfavg::eulerprod::{mathfrak_a, mathfrak_b, ramare_product, ramare_schedule};
use sfavg::supsearch::verified_sup_with;
use sfavg::{presets, Error, Interval, Result};

pub const NAMES: [&str; 14] = [
    "a1",
    "b1",
    "b2",
    "error_sum1",
    "prod_ram",
    "c2_sup",
    "E_1_1",
    "E_1_2",
    "E_2_1",
    "E_2_2",
    "H1",
    "H2",
    "consequences_odd",
    "consequences_even",
];

pub fn evaluate(name: &str, cfg: &Config) -> Result<Interval> {
    let pl = cfg.prime_limit;
    match name {
        "a1" => mathfrak_a(1, pl),
        "b1" => mathfrak_b(1, pl),
        "b2" => mathfrak_b(2, pl),
        "error_sum1" => Ok(convolution_estimate(&presets::one_over_phi(), 1, cfg)?.error_constant),
        "prod_ram" => ramare_product(pl, &ramare_schedule()),
        "c2_sup" => Ok(verified_sup_with(2, C2_SEARCH_MAX, mathfrak_b(2, pl)?)?.bound),
        "E_1_1" => Ok(critical_constants(pl)?.e1[0]),
        "E_1_2" => Ok(critical_constants(pl)?.e1[1]),
        "E_2_1" => e_alpha_v(Interval::point(2.0), 1, cfg),
        "E_2_2" => e_alpha_v(Interval::point(2.0), 2, cfg),
        "H1" => squarefree_count_bound(1),
        "H2" => squarefree_count_bound(2),
        "consequences_odd" => Ok(consequences_constants(cfg)?.0),
        "consequences_even" => Ok(consequences_constants(cfg)?.1),
        other => Err(Error::UnknownConstant(other.to_string())),
    }
}
