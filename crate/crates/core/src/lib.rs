//! One-dimensional density-classifying cellular automata.
//!
//! - [`ca`] has the rules (GKL, traffic, smoothing, modified traffic, AND-erosion)
//!   and exact evolution on rings and on finite perturbations of `0̄`/`1̄`.
//! - [`eroder`] does exhaustive verification of linear-time washout and
//!   per-site attraction reports.
//! - [`sparseness`] covers islands, territories and the staged erasure procedure.
//! - [`bounds`] does exact arithmetic for the survival and tail bounds of that
//!   procedure on Bernoulli sets.
//! - [`montecarlo`] runs seeded Bernoulli sampling, classification trials and
//!   parameter sweeps.

pub mod bounds;
pub mod ca;
pub mod cli;
pub mod eroder;
pub mod error;
pub mod montecarlo;
pub mod rng;
pub mod sparseness;

pub use error::{Error, Result};
