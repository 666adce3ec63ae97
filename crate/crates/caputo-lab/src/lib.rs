//! Numerical fractional calculus on truncated sequence spaces.
//!
//! The crate provides:
//! - Riemann–Liouville and Caputo operators with weakly singular product
//!   quadrature ([`frac_kernel`]),
//! - C¹ mollifier bumps and the dyadic accumulation family ([`bump_family`]),
//! - truncated `c0`/`l2` sequence spaces with the standard basis
//!   ([`sequence_space`]),
//! - a fractional Adams predictor–corrector solver with blow-up
//!   classification ([`fde_solver`]),
//! - the bounded non-extendable solution construction and its quantitative
//!   witnesses ([`counterexample`]),
//! - named experiments behind the `caputo-lab` binary ([`experiments`]).
//!
//! With the default `parallel` feature the witness scans run on rayon; the
//! sequential fallbacks (`*_seq`) are always available and produce identical
//! results.

pub mod bump_family;
pub mod counterexample;
pub mod experiments;
pub mod fde_solver;
pub mod frac_kernel;
pub mod gamma;
pub mod sequence_space;

mod error;

pub use error::{Error, Result};
