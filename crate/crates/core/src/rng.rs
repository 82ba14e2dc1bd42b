//! Seeded randomness shared by the sampling code.
//!
//! Every random draw in the crate goes through [`stream`], so one 64-bit
//! seed pins a run. The generator is PCG XSL RR 128/64 (`rand_pcg::Pcg64`)
//! initialised with `SeedableRng::seed_from_u64`. A Bernoulli(p) cell is 1
//! iff the next `u64` draw is below `floor(p * 2^64)` (always 1 when
//! `p == 1`), which is `rand::distr::Bernoulli`.
//!
//! Per-trial seeds come from [`derive_seed`]:
//! `mix(mix(base) ^ (p_index << 32 | trial_index))` with `mix` the
//! SplitMix64 finalizer. `mix` is a bijection on `u64`, so distinct index
//! pairs below `2^32` always get distinct seeds.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_pcg::Pcg64;

use crate::ca::BitRow;
use crate::error::{Error, Result};

/// Recorded in output metadata so runs can be reproduced elsewhere.
pub const PRNG_ID: &str = "pcg64-xsl-rr-128/64+seed_from_u64;bernoulli=u64<floor(p*2^64);split=splitmix64";

pub fn stream(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(base_seed: u64, p_index: u32, trial_index: u32) -> u64 {
    mix64(mix64(base_seed) ^ ((u64::from(p_index) << 32) | u64::from(trial_index)))
}

pub fn bernoulli(p: f64) -> Result<Bernoulli> {
    Bernoulli::new(p).map_err(|_| Error::InvalidArgument(format!("p = {p} is not in [0, 1]")))
}

/// `n` independent Bernoulli(p) bits from the stream of `seed`.
pub fn bernoulli_bits(n: usize, p: f64, seed: u64) -> Result<BitRow> {
    let dist = bernoulli(p)?;
    let mut rng = stream(seed);
    Ok(BitRow::from_bools((0..n).map(|_| dist.sample(&mut rng))))
}
