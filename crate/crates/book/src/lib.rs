//! The guide's code listings, compiled and run as doctests.
//!
//! mdbook cannot test snippets that use external crates, so each chapter
//! is attached to a module here and `cargo test --doc` runs it instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/support.md")]
pub mod support {}

#[doc = include_str!("../../../book/src/actions.md")]
pub mod actions {}

#[doc = include_str!("../../../book/src/channels.md")]
pub mod channels {}

#[doc = include_str!("../../../book/src/deletion.md")]
pub mod deletion {}

#[doc = include_str!("../../../book/src/boolean.md")]
pub mod boolean {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
