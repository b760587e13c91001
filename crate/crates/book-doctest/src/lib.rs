//! Runs the guide's code blocks under `cargo test --doc`; one module per chapter
//! so a failure names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}
#[doc = include_str!("../../../book/src/undularies.md")]
pub mod undularies {}
#[doc = include_str!("../../../book/src/sectors.md")]
pub mod sectors {}
#[doc = include_str!("../../../book/src/disk.md")]
pub mod disk {}
#[doc = include_str!("../../../book/src/radial.md")]
pub mod radial {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
