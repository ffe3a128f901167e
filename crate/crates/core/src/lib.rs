//! Orlicz norms and exponential concentration bounds.
//!
//! The crate evaluates the h-function family used by Bernstein, Bennett,
//! Prokhorov and Kruglov type inequalities, inverts them (via Lambert W where
//! a closed form exists), computes Bernstein-Orlicz and Bennett-Orlicz norms
//! of concrete distributions, and provides calculators for the associated
//! tail and maximal bounds together with a seeded verification harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod hkernel;
pub mod lambertw;
mod numeric;
pub mod orlicz;
pub mod verify;

pub use error::{Error, Result};
pub use numeric::fmt_sig;
