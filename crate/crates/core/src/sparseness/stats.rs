use std::collections::BTreeMap;

use super::{cover_certificate, erase_up_to, OutsideMode, SiteSet, SparsenessParams};
use crate::error::Result;
use crate::rng;

/// Summary of the erasure procedure on one sampled Bernoulli window.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsenessStats {
    pub p: f64,
    pub k: u64,
    pub window_size: usize,
    pub l_max: u64,
    pub seed: u64,
    /// `|E_l|` for `l = 0..=l_max`.
    pub residual_counts: Vec<usize>,
    pub islands: usize,
    /// Whether the union of all `J_l` is pairwise well separated.
    pub separation_ok: bool,
    /// The same for the certificate's cover of maximal islands.
    pub cover_separation_ok: bool,
    pub max_multiplicity: u32,
    pub multiplicity_histogram: BTreeMap<u32, u64>,
}

impl SparsenessStats {
    pub fn initial_count(&self) -> usize {
        self.residual_counts[0]
    }

    /// `|E_l| / |E|`, or 0 for an empty sample.
    pub fn residual_fraction(&self, l: u64) -> f64 {
        let initial = self.initial_count();
        if initial == 0 {
            0.0
        } else {
            self.residual_counts[l as usize] as f64 / initial as f64
        }
    }
}

/// Samples a Bernoulli(p) subset of `[0, window_size)` from the stream of
/// `seed`, erases it up to `l_max` and collects the statistics.
pub fn sample_sparseness_stats(
    p: f64,
    params: &SparsenessParams,
    window_size: usize,
    l_max: u64,
    seed: u64,
    outside: OutsideMode,
) -> Result<SparsenessStats> {
    let bits = rng::bernoulli_bits(window_size, p, seed)?;
    let members = bits
        .iter()
        .enumerate()
        .filter(|&(_, b)| b)
        .map(|(i, _)| i as i64);
    let e = SiteSet::new(0..=window_size as i64 - 1, members, outside)?;
    let trace = erase_up_to(&e, params, l_max);
    let cert = cover_certificate(&trace);
    let mut residual_counts = Vec::with_capacity(l_max as usize + 1);
    residual_counts.push(e.len());
    residual_counts.extend(trace.stages.iter().map(|s| s.residual_count));
    Ok(SparsenessStats {
        p,
        k: params.k(),
        window_size,
        l_max,
        seed,
        residual_counts,
        islands: cert.islands.len(),
        separation_ok: cert.separation_ok,
        cover_separation_ok: cert.cover_separation_ok,
        max_multiplicity: cert.max_multiplicity(),
        multiplicity_histogram: cert.multiplicity_histogram(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_is_empty() {
        let params = SparsenessParams::new(2).unwrap();
        let s = sample_sparseness_stats(0.0, &params, 1000, 5, 1, OutsideMode::Empty).unwrap();
        assert_eq!(s.initial_count(), 0);
        assert!(s.residual_counts.iter().all(|&c| c == 0));
        assert_eq!(s.residual_fraction(5), 0.0);
    }

    #[test]
    fn p_one_erases_nothing() {
        let params = SparsenessParams::new(3).unwrap();
        for outside in [OutsideMode::Empty, OutsideMode::Unknown] {
            let s = sample_sparseness_stats(1.0, &params, 500, 20, 9, outside).unwrap();
            assert_eq!(s.initial_count(), 500);
            assert!(s.residual_counts.iter().all(|&c| c == 500));
            assert_eq!(s.islands, 0);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let params = SparsenessParams::new(2).unwrap();
        let a = sample_sparseness_stats(0.01, &params, 20_000, 11, 5, OutsideMode::Empty).unwrap();
        let b = sample_sparseness_stats(0.01, &params, 20_000, 11, 5, OutsideMode::Empty).unwrap();
        assert_eq!(a, b);
        assert!(a.cover_separation_ok);
        assert!(a.residual_counts.windows(2).all(|w| w[1] <= w[0]));
    }
}
