//! Special functions and the base random source.
//!
//! Everything downstream (densities, priors, conditionals) is written in
//! log space on top of these, so the accuracy contracts are tight:
//! `ln_gamma` to 1e-12 absolute on `[1e-6, 1e6]` (relative at the top end,
//! where the value itself is ~1e7), `digamma`/`trigamma` to 1e-10, and the
//! regularized incomplete gamma pair summing to one within 1e-12.

mod gamma;
mod incomplete;
mod random;

pub use gamma::{digamma, ln_gamma, trigamma};
pub use incomplete::{reg_inc_gamma_lower, reg_inc_gamma_upper};
pub use random::{gamma_draw, ln_gamma_draw, RandomSource};
