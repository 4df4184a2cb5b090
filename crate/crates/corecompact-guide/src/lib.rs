//! The guide chapters, compiled as doc-tests so the book in `book/` can
//! never drift from the library it documents. Each module is one chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/spaces.md")]
pub mod spaces {}

#[doc = include_str!("../../../book/src/way-below.md")]
pub mod way_below {}

#[doc = include_str!("../../../book/src/interpolation.md")]
pub mod interpolation {}

#[doc = include_str!("../../../book/src/colimits.md")]
pub mod colimits {}

#[doc = include_str!("../../../book/src/counterexamples.md")]
pub mod counterexamples {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
