//! The user guide, chapter by chapter.
//!
//! The book sources under `book/src/` are included here verbatim so that
//! `cargo test --doc` compiles and runs every code snippet in the guide —
//! the chapters cannot drift from the API. Rendered HTML comes from
//! `mdbook build book` when the `mdbook` binary is available.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/generators.md")]
pub mod generators {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/stein-kernel.md")]
pub mod stein_kernel {}

#[doc = include_str!("../../../book/src/testing.md")]
pub mod testing {}

#[doc = include_str!("../../../book/src/random-features.md")]
pub mod random_features {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
