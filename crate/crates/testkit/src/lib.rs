//! Test support for the holc workspace: seeded generators and oracles kept
//! independent of the kernel code paths they are used to check.

pub mod gen;
pub mod oracle;
pub mod setoracle;

pub use gen::rng;
