//! Bernoulli sampling, classification trials and parameter sweeps.
//!
//! Trial `j` at the `i`-th value of `p` in a sweep draws its configuration
//! from `rng::derive_seed(base_seed, i, j)`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::path::Path;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::ca::{evolve_recorded, RingConfig, Rule, Symbol, WindowConfig};
use crate::eroder::washout_time;
use crate::error::{Error, Result};
use crate::rng;

/// Cap on `width * (t_max + 1)` for rendered diagrams.
pub const MAX_DIAGRAM_CELLS: usize = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    Ring { n: usize },
    /// Bernoulli cells on `[0, width)`, `background` elsewhere.
    Window { background: Symbol, width: usize },
}

impl Topology {
    /// Number of sampled cells.
    pub fn size(&self) -> usize {
        match *self {
            Topology::Ring { n } => n,
            Topology::Window { width, .. } => width,
        }
    }

    /// Default step budget, `4n`.
    pub fn default_t_max(&self) -> usize {
        4 * self.size()
    }

    fn name(&self) -> &'static str {
        match self {
            Topology::Ring { .. } => "ring",
            Topology::Window { .. } => "window",
        }
    }

    fn background_label(&self) -> String {
        match self {
            Topology::Ring { .. } => String::new(),
            Topology::Window { background, .. } => background.to_string(),
        }
    }
}

/// A sampled configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    Ring(RingConfig),
    Window(WindowConfig),
}

impl Sample {
    pub fn count_ones(&self) -> usize {
        match self {
            Sample::Ring(c) => c.count_ones(),
            Sample::Window(c) => c.cells().count_ones(),
        }
    }
}

pub fn sample_bernoulli(topology: Topology, p: f64, seed: u64) -> Result<Sample> {
    let bits = rng::bernoulli_bits(topology.size(), p, seed)?;
    Ok(match topology {
        Topology::Ring { .. } => Sample::Ring(RingConfig::new(bits)?),
        Topology::Window { background, .. } => Sample::Window(WindowConfig::new(background, 0, bits)),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSpec {
    pub rule: Rule,
    pub topology: Topology,
    pub p: f64,
    pub t_max: usize,
    pub seed: u64,
}

impl TrialSpec {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!("p = {} is not in [0, 1]", self.p)));
        }
        match self.topology {
            Topology::Ring { n } if n % 2 == 0 => Err(Error::InvalidArgument(format!(
                "ring length {n} is even; the majority needs an odd length"
            ))),
            Topology::Window { background, .. } if !self.rule.fixes(background) => {
                Err(Error::NonFixedBackground {
                    rule: self.rule.name().to_string(),
                    background,
                })
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Fixed0,
    Fixed1,
    Unresolved,
}

impl Verdict {
    pub fn fixed(s: Symbol) -> Verdict {
        match s {
            Symbol::Zero => Verdict::Fixed0,
            Symbol::One => Verdict::Fixed1,
        }
    }

    pub fn symbol(self) -> Option<Symbol> {
        match self {
            Verdict::Fixed0 => Some(Symbol::Zero),
            Verdict::Fixed1 => Some(Symbol::One),
            Verdict::Unresolved => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Fixed0 => "fixed_to_0",
            Verdict::Fixed1 => "fixed_to_1",
            Verdict::Unresolved => "unresolved",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub rule: String,
    pub topology: Topology,
    pub p: f64,
    pub t_max: usize,
    pub seed: u64,
    pub initial_ones: usize,
    /// Fraction of ones among the sampled cells.
    pub initial_density: Ratio<usize>,
    pub verdict: Verdict,
    /// Present iff the verdict is `Fixed0` or `Fixed1`.
    pub fixation_time: Option<usize>,
    /// Whether the verdict matches the strict initial majority. On a
    /// window the majority is the background.
    pub correct: Option<bool>,
}

impl TrialRecord {
    pub const CSV_HEADER: &'static str =
        "rule,topology,background,n,p,t_max,seed,initial_ones,initial_density,verdict,fixation_time,correct";

    pub fn csv_row(&self) -> String {
        let density = if self.topology.size() == 0 {
            String::new()
        } else {
            (*self.initial_density.numer() as f64 / *self.initial_density.denom() as f64).to_string()
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.rule,
            self.topology.name(),
            self.topology.background_label(),
            self.topology.size(),
            self.p,
            self.t_max,
            self.seed,
            self.initial_ones,
            density,
            self.verdict,
            self.fixation_time.map(|t| t.to_string()).unwrap_or_default(),
            self.correct.map(|c| c.to_string()).unwrap_or_default(),
        )
    }
}

fn strict_majority(ones: usize, n: usize) -> Option<Symbol> {
    match (2 * ones).cmp(&n) {
        std::cmp::Ordering::Greater => Some(Symbol::One),
        std::cmp::Ordering::Less => Some(Symbol::Zero),
        std::cmp::Ordering::Equal => None,
    }
}

/// Evolves a Bernoulli sample until it is uniform (ring) or equal to the
/// background (window), or until `t_max` steps have run.
pub fn run_trial(spec: &TrialSpec) -> Result<TrialRecord> {
    spec.validate()?;
    let sample = sample_bernoulli(spec.topology, spec.p, spec.seed)?;
    let size = spec.topology.size();
    let ones = sample.count_ones();
    let (verdict, fixation_time, majority) = match sample {
        Sample::Ring(mut x) => {
            let mut outcome = (Verdict::Unresolved, None);
            for t in 0..=spec.t_max {
                if let Some(s) = x.uniform_symbol() {
                    outcome = (Verdict::fixed(s), Some(t));
                    break;
                }
                if t < spec.t_max {
                    x = x.step(&spec.rule);
                }
            }
            (outcome.0, outcome.1, strict_majority(ones, size))
        }
        Sample::Window(x) => {
            let bg = x.background();
            match washout_time(&spec.rule, &x, spec.t_max)? {
                Some(t) => (Verdict::fixed(bg), Some(t), Some(bg)),
                None => (Verdict::Unresolved, None, Some(bg)),
            }
        }
    };
    let correct = majority.map(|m| verdict.symbol() == Some(m));
    Ok(TrialRecord {
        rule: spec.rule.name().to_string(),
        topology: spec.topology,
        p: spec.p,
        t_max: spec.t_max,
        seed: spec.seed,
        initial_ones: ones,
        initial_density: Ratio::new_raw(ones, size.max(1)),
        verdict,
        fixation_time,
        correct,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub trials: usize,
    pub fixed0: usize,
    pub fixed1: usize,
    pub unresolved: usize,
    /// Mean over the trials that fixed; `None` if none did.
    pub mean_fixation_time: Option<f64>,
}

impl SweepRow {
    pub fn fixed0_frac(&self) -> Ratio<usize> {
        Ratio::new(self.fixed0, self.trials)
    }

    pub fn fixed1_frac(&self) -> Ratio<usize> {
        Ratio::new(self.fixed1, self.trials)
    }

    pub fn unresolved_frac(&self) -> Ratio<usize> {
        Ratio::new(self.unresolved, self.trials)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rule: String,
    pub topology: Topology,
    pub t_max: usize,
    pub base_seed: u64,
    pub rows: Vec<SweepRow>,
    /// Every trial, grouped by `p` in input order, then by trial index.
    pub records: Vec<TrialRecord>,
}

fn ratio_f64(r: Ratio<usize>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl SweepResult {
    pub const CSV_HEADER: &'static str =
        "p,trials,fixed0_frac,fixed1_frac,unresolved_frac,mean_fixation_time,base_seed,rule,n,t_max";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                row.p,
                row.trials,
                ratio_f64(row.fixed0_frac()),
                ratio_f64(row.fixed1_frac()),
                ratio_f64(row.unresolved_frac()),
                row.mean_fixation_time.map(|t| t.to_string()).unwrap_or_default(),
                self.base_seed,
                self.rule,
                self.topology.size(),
                self.t_max,
            );
        }
        out
    }

    pub fn trials_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(TrialRecord::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

/// Runs `trials` trials at every `p` in `p_list`, in parallel.
pub fn sweep(
    rule: &Rule,
    topology: Topology,
    p_list: &[f64],
    trials: usize,
    t_max: usize,
    base_seed: u64,
) -> Result<SweepResult> {
    if p_list.is_empty() {
        return Err(Error::InvalidArgument("empty list of p values".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let p_count = u32::try_from(p_list.len())
        .map_err(|_| Error::TooLarge(format!("{} values of p", p_list.len())))?;
    let trial_count =
        u32::try_from(trials).map_err(|_| Error::TooLarge(format!("{trials} trials per p")))?;

    let mut seeds = Vec::with_capacity(p_list.len() * trials);
    for i in 0..p_count {
        for j in 0..trial_count {
            seeds.push((i as usize, rng::derive_seed(base_seed, i, j)));
        }
    }
    let distinct: HashSet<u64> = seeds.iter().map(|&(_, s)| s).collect();
    assert_eq!(distinct.len(), seeds.len(), "derived seeds collide");

    let records = seeds
        .par_iter()
        .map(|&(i, seed)| {
            run_trial(&TrialSpec {
                rule: rule.clone(),
                topology,
                p: p_list[i],
                t_max,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = p_list
        .iter()
        .zip(records.chunks(trials))
        .map(|(&p, chunk)| {
            let count = |v| chunk.iter().filter(|r| r.verdict == v).count();
            let times: Vec<usize> = chunk.iter().filter_map(|r| r.fixation_time).collect();
            let mean = (!times.is_empty())
                .then(|| times.iter().sum::<usize>() as f64 / times.len() as f64);
            SweepRow {
                p,
                trials,
                fixed0: count(Verdict::Fixed0),
                fixed1: count(Verdict::Fixed1),
                unresolved: count(Verdict::Unresolved),
                mean_fixation_time: mean,
            }
        })
        .collect();

    Ok(SweepResult {
        rule: rule.name().to_string(),
        topology,
        t_max,
        base_seed,
        rows,
        records,
    })
}

/// Space-time diagram of one Bernoulli sample as a PBM string, rows
/// `0..=t_max` from top to bottom. `comments` become `#` lines.
pub fn diagram_pbm(
    rule: &Rule,
    topology: Topology,
    p: f64,
    seed: u64,
    t_max: usize,
    comments: &[String],
) -> Result<String> {
    let cells = match topology {
        Topology::Ring { n } => Some(n),
        Topology::Window { width, .. } => width.checked_add(2 * rule.radius() * t_max),
    }
    .and_then(|w| w.checked_mul(t_max + 1));
    if cells.is_none_or(|c| c > MAX_DIAGRAM_CELLS) {
        return Err(Error::TooLarge(format!(
            "diagram of {} cells over {} steps",
            topology.size(),
            t_max
        )));
    }
    Ok(match sample_bernoulli(topology, p, seed)? {
        Sample::Ring(x) => evolve_recorded(rule, &x, t_max)?.to_pbm(comments),
        Sample::Window(x) => evolve_recorded(rule, &x, t_max)?.to_pbm(comments),
    })
}

/// Writes [`diagram_pbm`] to `path`.
pub fn render_diagram(
    rule: &Rule,
    topology: Topology,
    p: f64,
    seed: u64,
    t_max: usize,
    path: &Path,
) -> Result<()> {
    let pbm = diagram_pbm(rule, topology, p, seed, t_max, &[])?;
    std::fs::write(path, pbm)?;
    Ok(())
}
