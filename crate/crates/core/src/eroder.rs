//! Linear-time eroder checks.
//!
//! A rule washes out finite islands on a uniform background `z` in linear
//! time with constant `m` if every perturbation whose errors fit in an
//! interval of length `n` returns to `z` within `m * n` steps.
//! [`verify_linear_eroder`] checks this exhaustively for all `n <= n_max`.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::ca::{BitRow, Rule, Symbol, WindowConfig};
use crate::error::{Error, Result};

/// Largest diameter [`verify_linear_eroder`] will enumerate.
pub const MAX_ENUMERATED_DIAMETER: usize = 24;

/// Smallest `t <= t_max` with `Φ^t x` equal to the background everywhere.
pub fn washout_time(rule: &Rule, x: &WindowConfig, t_max: usize) -> Result<Option<usize>> {
    if !rule.fixes(x.background()) {
        return Err(Error::NonFixedBackground {
            rule: rule.name().to_string(),
            background: x.background(),
        });
    }
    let mut current = x.clone();
    for t in 0..=t_max {
        if current.is_background() {
            return Ok(Some(t));
        }
        if t < t_max {
            current = current.step(rule)?;
        }
    }
    Ok(None)
}

/// Outcome of one perturbation; `Never` sorts above every finite time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Washout {
    At(usize),
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiameterRow {
    pub n: usize,
    pub patterns_tested: u64,
    /// `None` when at least one pattern was still present at the step cap.
    pub max_washout_time: Option<usize>,
    /// `m * n`.
    pub bound: usize,
}

impl DiameterRow {
    pub fn pass(&self) -> bool {
        self.max_washout_time.is_some_and(|t| t <= self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EroderReport {
    pub rule: String,
    pub background: Symbol,
    pub m: usize,
    pub n_max: usize,
    /// Steps simulated per pattern beyond `m * n` before giving up.
    pub slack: usize,
    pub rows: Vec<DiameterRow>,
    pub pass: bool,
}

impl EroderReport {
    pub fn worst_case(&self, n: usize) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.n == n)
            .and_then(|r| r.max_washout_time)
    }

    pub const CSV_HEADER: &'static str =
        "rule,background,n,patterns_tested,max_washout_time,bound_mn,pass";

    /// One row per diameter. `max_washout_time` is empty when some
    /// pattern never washed out within the step cap.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let t = row.max_washout_time.map(|t| t.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.rule,
                self.background,
                row.n,
                row.patterns_tested,
                t,
                row.bound,
                row.pass()
            );
        }
        out
    }
}

/// The perturbation of `background` with errors at the set bits of
/// `pattern`, placed on `[0, n)`.
pub fn pattern_window(background: Symbol, n: usize, pattern: u64) -> WindowConfig {
    let bg = background.is_one();
    let cells = BitRow::from_bools((0..n).map(|i| ((pattern >> i) & 1 == 1) != bg));
    WindowConfig::new(background, 0, cells)
}

/// Checks every perturbation of `background` supported in `[0, n)` for
/// each `n` in `1..=n_max`: all `2^n` contents per `n`, each simulated for
/// at most `m * n + 4r` steps.
pub fn verify_linear_eroder(
    rule: &Rule,
    background: Symbol,
    m: usize,
    n_max: usize,
) -> Result<EroderReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if n_max > MAX_ENUMERATED_DIAMETER {
        return Err(Error::TooLarge(format!(
            "2^{n_max} patterns per diameter (limit is n_max <= {MAX_ENUMERATED_DIAMETER})"
        )));
    }
    if !rule.fixes(background) {
        return Err(Error::NonFixedBackground {
            rule: rule.name().to_string(),
            background,
        });
    }
    let slack = 4 * rule.radius();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let bound = m * n;
        let t_max = bound + slack;
        let worst = (0..1u64 << n)
            .into_par_iter()
            .map(|pattern| {
                let x = pattern_window(background, n, pattern);
                washout_time(rule, &x, t_max).map(|t| t.map_or(Washout::Never, Washout::At))
            })
            .try_reduce(|| Washout::At(0), |a, b| Ok(a.max(b)))?;
        rows.push(DiameterRow {
            n,
            patterns_tested: 1u64 << n,
            max_washout_time: match worst {
                Washout::At(t) => Some(t),
                Washout::Never => None,
            },
            bound,
        });
    }
    let pass = rows.iter().all(DiameterRow::pass);
    Ok(EroderReport {
        rule: rule.name().to_string(),
        background,
        m,
        n_max,
        slack,
        rows,
        pass,
    })
}

/// Per-site record of when a trajectory last disagreed with its
/// background inside a probe interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractionReport {
    pub probe: RangeInclusive<i64>,
    pub t_max: usize,
    /// Indexed by `site - probe.start()`; `None` means the site never
    /// disagreed in `[0, t_max]`.
    pub last_disagreement: Vec<Option<usize>>,
}

impl AttractionReport {
    /// First time from which the site agrees with the background through
    /// `t_max`, or `None` if it still disagrees at `t_max`.
    pub fn fixation_time(&self, site: i64) -> Option<usize> {
        let idx = (site - self.probe.start()) as usize;
        match self.last_disagreement[idx] {
            None => Some(0),
            Some(t) if t >= self.t_max => None,
            Some(t) => Some(t + 1),
        }
    }

    pub fn unresolved(&self) -> Vec<i64> {
        self.probe
            .clone()
            .filter(|&s| self.fixation_time(s).is_none())
            .collect()
    }

    pub fn max_fixation_time(&self) -> Option<usize> {
        self.probe
            .clone()
            .map(|s| self.fixation_time(s))
            .try_fold(0, |acc, t| t.map(|t| acc.max(t)))
    }
}

/// Runs `x` for `t_max` steps and records, for each probe site, the last
/// time it differs from the background.
pub fn attraction_check(
    rule: &Rule,
    x: &WindowConfig,
    probe: RangeInclusive<i64>,
    t_max: usize,
) -> Result<AttractionReport> {
    if !rule.fixes(x.background()) {
        return Err(Error::NonFixedBackground {
            rule: rule.name().to_string(),
            background: x.background(),
        });
    }
    let bg = x.background();
    let width = (probe.end() - probe.start() + 1).max(0) as usize;
    let mut last = vec![None; width];
    let mut current = x.clone();
    for t in 0..=t_max {
        if current.is_background() {
            break;
        }
        for (slot, site) in last.iter_mut().zip(probe.clone()) {
            if current.get(site) != bg {
                *slot = Some(t);
            }
        }
        if t < t_max {
            current = current.step(rule)?;
        }
    }
    Ok(AttractionReport {
        probe,
        t_max,
        last_disagreement: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::evolve;
    use Symbol::{One, Zero};

    #[test]
    fn empty_perturbation_washes_at_zero() {
        let x = WindowConfig::uniform(Zero);
        assert_eq!(washout_time(&Rule::gkl(), &x, 5).unwrap(), Some(0));
        assert_eq!(washout_time(&Rule::gkl(), &x, 0).unwrap(), Some(0));
    }

    #[test]
    fn gkl_single_one() {
        let x = WindowConfig::with_errors(Zero, &[0]);
        // the lone 1 sees maj(1, 0, 0) and no 0 cell reaches a majority
        assert_eq!(washout_time(&Rule::gkl(), &x, 2).unwrap(), Some(1));
    }

    #[test]
    fn and_erosion_never_washes_a_zero_on_ones() {
        let x = WindowConfig::with_errors(One, &[0]);
        for t_max in [0, 1, 10, 50] {
            assert_eq!(washout_time(&Rule::and_erosion(), &x, t_max).unwrap(), None);
        }
        // while ones on zeros are eroded
        let y = WindowConfig::with_errors(Zero, &[0, 1, 2]);
        assert_eq!(washout_time(&Rule::and_erosion(), &y, 5).unwrap(), Some(2));
    }

    #[test]
    fn non_fixed_background() {
        let x = WindowConfig::uniform(Zero);
        assert!(washout_time(&Rule::elementary(1), &x, 3).is_err());
        assert!(verify_linear_eroder(&Rule::elementary(1), Zero, 2, 3).is_err());
        assert!(attraction_check(&Rule::elementary(1), &x, 0..=3, 3).is_err());
    }

    #[test]
    fn and_erosion_fails_on_ones() {
        let report = verify_linear_eroder(&Rule::and_erosion(), One, 2, 3).unwrap();
        assert!(!report.pass);
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.max_washout_time.is_none()));
    }

    #[test]
    fn and_erosion_passes_on_zeros() {
        // an island of ones of length n vanishes after ceil(n / 2) steps
        let report = verify_linear_eroder(&Rule::and_erosion(), Zero, 1, 8).unwrap();
        assert!(report.pass);
        for n in 1..=8 {
            assert_eq!(report.worst_case(n), Some(n.div_ceil(2)));
        }
    }

    #[test]
    fn n_max_zero_rejected() {
        assert!(verify_linear_eroder(&Rule::gkl(), Zero, 2, 0).is_err());
    }

    #[test]
    fn gkl_small_diameters_pass() {
        let report = verify_linear_eroder(&Rule::gkl(), Zero, 2, 8).unwrap();
        assert!(report.pass, "{:?}", report.rows);
        let csv = report.to_csv();
        assert!(csv.starts_with(EroderReport::CSV_HEADER));
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    }

    #[test]
    fn washed_patterns_stay_washed() {
        let rule = Rule::modified_traffic();
        for pattern in 0..1u64 << 6 {
            let x = pattern_window(Zero, 6, pattern);
            let t = washout_time(&rule, &x, 16).unwrap().unwrap();
            for s in t..=12 {
                assert!(evolve(&rule, &x, s).unwrap().is_background());
            }
        }
    }

    #[test]
    fn washout_is_translation_invariant() {
        let rule = Rule::gkl();
        for pattern in 0..1u64 << 7 {
            let x = pattern_window(One, 7, pattern);
            let t = washout_time(&rule, &x, 30).unwrap();
            for shift in [-13, 5, 64] {
                assert_eq!(washout_time(&rule, &x.shifted(shift), 30).unwrap(), t);
            }
        }
    }

    #[test]
    fn gkl_washout_is_conjugation_symmetric() {
        let rule = Rule::gkl();
        for pattern in 0..1u64 << 8 {
            let x = pattern_window(Zero, 8, pattern);
            assert_eq!(
                washout_time(&rule, &x, 30).unwrap(),
                washout_time(&rule, &x.conjugate(), 30).unwrap()
            );
        }
    }

    #[test]
    fn attraction_of_empty_and_single_error() {
        let rule = Rule::gkl();
        let empty = attraction_check(&rule, &WindowConfig::uniform(Zero), -5..=5, 10).unwrap();
        assert!((-5..=5).all(|s| empty.fixation_time(s) == Some(0)));

        let single = WindowConfig::with_errors(Zero, &[0]);
        let report = attraction_check(&rule, &single, -5..=5, 10).unwrap();
        assert!(report.unresolved().is_empty());
        assert_eq!(report.fixation_time(0), Some(1));
        assert_eq!(report.max_fixation_time(), Some(1));
    }

    #[test]
    fn attraction_reports_persistent_errors() {
        let x = WindowConfig::with_errors(One, &[0]);
        let report = attraction_check(&Rule::and_erosion(), &x, -3..=3, 5).unwrap();
        assert_eq!(report.unresolved(), vec![-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(report.max_fixation_time(), None);
    }
}
