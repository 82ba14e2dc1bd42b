use proptest::prelude::*;

use densclass::ca::{evolve, RingConfig, Rule, Symbol, WindowConfig};
use densclass::montecarlo::{run_trial, sweep, Topology, TrialSpec};
use densclass::sparseness::{erase_up_to, OutsideMode, SiteSet, SparsenessParams};

fn rules() -> Vec<Rule> {
    vec![
        Rule::gkl(),
        Rule::traffic(),
        Rule::modified_traffic(),
        Rule::elementary(110),
        Rule::elementary(232),
    ]
}

fn ring(bits: &[bool]) -> RingConfig {
    let cells: Vec<Symbol> = bits.iter().map(|&b| Symbol::from(b)).collect();
    RingConfig::from_symbols(&cells).unwrap()
}

fn naive_step(rule: &Rule, bits: &[bool]) -> Vec<bool> {
    let n = bits.len() as i64;
    let r = rule.radius() as i64;
    (0..n)
        .map(|i| {
            let nb: Vec<Symbol> = (i - r..=i + r)
                .map(|j| Symbol::from(bits[j.rem_euclid(n) as usize]))
                .collect();
            rule.output(&nb).is_one()
        })
        .collect()
}

fn bits_of(x: &RingConfig) -> Vec<bool> {
    (0..x.len() as i64).map(|i| x.get(i).is_one()).collect()
}

proptest! {
    #[test]
    fn ring_step_matches_naive(bits in prop::collection::vec(any::<bool>(), 1..200), which in 0usize..5) {
        let rule = &rules()[which];
        prop_assert_eq!(bits_of(&ring(&bits).step(rule)), naive_step(rule, &bits));
    }

    #[test]
    fn conjugate_commutes_with_flip_and_mirror(bits in prop::collection::vec(any::<bool>(), 1..120), which in 0usize..5, t in 0usize..20) {
        let rule = &rules()[which];
        let dual = |v: &[bool]| -> Vec<bool> { v.iter().rev().map(|b| !b).collect() };
        let lhs = evolve(&rule.conjugate(), &ring(&dual(&bits)), t).unwrap();
        let rhs = dual(&bits_of(&evolve(rule, &ring(&bits), t).unwrap()));
        prop_assert_eq!(bits_of(&lhs), rhs);
    }

    #[test]
    fn window_agrees_with_large_ring(sites in prop::collection::btree_set(0i64..40, 0..10), t in 0usize..12) {
        // a ring much wider than the light cone sees the same dynamics
        let rule = Rule::gkl();
        let sites: Vec<i64> = sites.into_iter().collect();
        let w = evolve(&rule, &WindowConfig::with_errors(Symbol::Zero, &sites), t).unwrap();
        let n = 40 + 2 * 3 * 12 + 2;
        let offset = 3 * 12 + 1;
        let mut bits = vec![false; n];
        for &s in &sites {
            bits[(s + offset) as usize] = true;
        }
        let r = evolve(&rule, &ring(&bits), t).unwrap();
        for i in 0..n as i64 {
            prop_assert_eq!(r.get(i), w.get(i - offset));
        }
    }

    #[test]
    fn residuals_are_nested(sites in prop::collection::btree_set(0i64..300, 0..40), k in 1u64..6, empty in any::<bool>()) {
        let outside = if empty { OutsideMode::Empty } else { OutsideMode::Unknown };
        let e = SiteSet::new(0..=299, sites, outside).unwrap();
        let trace = erase_up_to(&e, &SparsenessParams::new(k).unwrap(), 30);
        let mut prev = e.clone();
        for l in 0..=trace.l_max() {
            let cur = trace.residual_at(l);
            prop_assert!(cur.is_subset(&prev));
            prev = cur;
        }
    }

    #[test]
    fn trials_are_deterministic(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let spec = TrialSpec { rule: Rule::gkl(), topology: Topology::Ring { n: 31 }, p, t_max: 124, seed };
        prop_assert_eq!(run_trial(&spec).unwrap(), run_trial(&spec).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sweep_fractions_sum_to_one(seed in any::<u64>(), trials in 1usize..20) {
        let result = sweep(&Rule::gkl(), Topology::Ring { n: 21 }, &[0.2, 0.5, 0.8], trials, 84, seed).unwrap();
        for row in &result.rows {
            prop_assert_eq!(row.fixed0 + row.fixed1 + row.unresolved, trials);
            prop_assert!((row.fixed0_frac() + row.fixed1_frac() + row.unresolved_frac()).is_integer());
        }
        prop_assert_eq!(result.records.len(), 3 * trials);
    }
}
