//! Certified interval estimates for averages of square-free supported
//! multiplicative functions.

pub mod error;
pub mod estimator;
pub mod eulerprod;
pub mod function;
pub mod interval;
pub mod mainterm;
pub mod oracle;
pub mod presets;
pub mod primefn;
pub mod primes;
pub mod supsearch;
pub mod tailconst;
pub mod zetapow;

pub use error::{Error, Result};
pub use interval::Interval;
