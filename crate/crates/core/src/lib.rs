//! Transient attack and zero-start defense simulator for the
//! Kirchhoff-law-Johnson-noise (KLJN) secure key exchanger.
//!
//! The crate is organised bottom-up:
//!
//! * [`noise`] synthesizes band-limited Gaussian generator records and searches
//!   them for defense-compliant start points.
//! * [`line`] is a lossless transmission line with resistive Thevenin
//!   terminations, stepped with a traveling-wave (Bergeron) update.
//! * [`protocol`] holds the physical configuration, the bit-exchange states and
//!   the four start-up scenarios.
//! * [`attack`] evaluates Eve's windowed mean-square statistics and decisions.
//! * [`montecarlo`] runs seeded, scheduling-independent experiments and the
//!   steady-state validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attack;
pub mod error;
pub mod line;
pub mod montecarlo;
pub mod noise;
pub mod protocol;

pub use error::{Error, Result};
