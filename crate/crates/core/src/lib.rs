//! Irrationality exponents and bases from continued fractions.
//!
//! The crate computes finite-prefix estimates of the irrationality exponent
//! `mu` and base `beta` of a real number, generates numbers with a prescribed
//! approximation order (Jarnik continued fractions) or irrationality base
//! (tower series), and checks the defining inequalities with exact
//! rational arithmetic and brute-force approximation oracles.

pub mod cli;
pub mod constructions;
pub mod contfrac;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
