//! Exact theta-series arithmetic for extremal Type II codes over `Z/2kZ`.
//!
//! The crate computes, in exact integer arithmetic, the coefficients that an
//! extremal theta series of length `n` would be forced to have, checks the
//! positivity argument behind the bound `d_E <= 4k floor(n/24) + 4k`, scans
//! for the length where the second forced coefficient turns negative, and
//! evaluates the saddle-point constants that govern its growth.
//!
//! Modules, bottom up:
//! - [`exactseries`]: truncated power series on a fractional exponent grid.
//! - [`modforms`]: `E4`, `Delta`, `h`, and the theta functions `f_0 .. f_k`.
//! - [`codes`]: codes over `Z/2kZ`, weight enumerators, Construction A.
//! - [`extremal`]: the `b_{2s}` coefficients, forced `beta*` values, scans.
//! - [`asymptotics`]: saddle point of `F(y) = e^{2 pi y} h(e^{-2 pi y})`.
//! - [`cli`]: command-line front end and output formats.

pub mod asymptotics;
pub mod cli;
pub mod codes;
pub mod error;
pub mod exactseries;
pub mod extremal;
pub mod modforms;
mod serial;

pub use error::{Error, Result};
pub use exactseries::FracSeries;
