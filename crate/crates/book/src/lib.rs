//! Compiles and runs every code block of the guide in `book/src`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/networks.md")]
pub mod networks {}

#[doc = include_str!("../../../book/src/transform.md")]
pub mod transform {}

#[doc = include_str!("../../../book/src/feasibility.md")]
pub mod feasibility {}

#[doc = include_str!("../../../book/src/alignment.md")]
pub mod alignment {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
