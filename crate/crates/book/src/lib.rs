//! The guide in `book/` is mdbook source, and mdbook cannot resolve
//! workspace crates when it tests snippets. Including each chapter as a
//! module doc turns its code blocks into ordinary doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/decimals.md")]
pub mod decimals {}

#[doc = include_str!("../../../book/src/pi.md")]
pub mod pi {}

#[doc = include_str!("../../../book/src/graphs.md")]
pub mod graphs {}

#[doc = include_str!("../../../book/src/continued-fractions.md")]
pub mod continued_fractions {}

#[doc = include_str!("../../../book/src/registry.md")]
pub mod registry {}

#[doc = include_str!("../../../book/src/sums.md")]
pub mod sums {}

#[doc = include_str!("../../../book/src/signals.md")]
pub mod signals {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
