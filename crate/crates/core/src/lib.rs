pub mod constants;
pub mod conjectures;
pub mod contfrac;
pub mod decimal;
pub mod error;
pub mod numtheory;
pub mod expansion;
pub mod fir;
pub mod graph;
pub mod group;
pub mod lps;
pub mod pi;
pub mod selftest;
pub mod special;
pub mod spectral;
pub mod sums;
pub mod tau;

pub use decimal::BigDecimal;
pub use error::{Error, Result};
