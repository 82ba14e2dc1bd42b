use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{territory, Island, OutsideMode, SiteSet, SparsenessParams};

/// One stage of the procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub l: u64,
    /// `J_l`: every isolated length-`l` island meeting the previous set.
    pub islands: Vec<Island>,
    /// `A_l`: members removed at this stage, ascending.
    pub erased: Vec<i64>,
    /// `|E_l|`.
    pub residual_count: usize,
}

/// Runs of consecutive members with gaps of at most `reach`, as index
/// ranges into `members`.
fn clusters(members: &[i64], reach: i64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut begin = 0;
    for i in 1..=members.len() {
        if i == members.len() || members[i] - members[i - 1] > reach {
            if i > begin {
                out.push((begin, i - 1));
            }
            begin = i;
        }
    }
    out
}

/// Stage `l`: returns `J_l` and `E_l = E_{l-1}` minus the union of `J_l`.
///
/// A length-`l` island can only be isolated if the members it holds form
/// a whole run of members with internal gaps `<= k l`, so each such run
/// with span `<= l` is tested for the admissible island starts.
pub fn erasure_stage(e_prev: &SiteSet, l: u64, params: &SparsenessParams) -> (Vec<Island>, SiteSet) {
    assert!(l >= 1, "stage length starts at 1");
    let members = e_prev.members();
    let reach = params.reach(l);
    let len = l as i64;
    let window = e_prev.window();
    let mut islands = Vec::new();
    let mut erase = vec![false; members.len()];

    for (a, b) in clusters(members, reach) {
        let first = members[a];
        let last = members[b];
        if last - first + 1 > len {
            continue;
        }
        let mut lo = last - len + 1;
        let mut hi = first;
        if a > 0 {
            lo = lo.max(members[a - 1] + reach + 1);
        }
        if b + 1 < members.len() {
            hi = hi.min(members[b + 1] - len - reach);
        }
        if e_prev.outside() == OutsideMode::Unknown {
            lo = lo.max(window.start() + reach);
            hi = hi.min(window.end() - reach - (len - 1));
        }
        if lo > hi {
            continue;
        }
        for s in lo..=hi {
            islands.push(Island { start: s, len: l });
        }
        erase[a..=b].iter_mut().for_each(|e| *e = true);
    }

    let next: Vec<i64> = members
        .iter()
        .zip(&erase)
        .filter(|&(_, &gone)| !gone)
        .map(|(&m, _)| m)
        .collect();
    (islands, e_prev.with_members(next))
}

/// The record of running stages `1..=l_max` on a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasureTrace {
    pub params: SparsenessParams,
    pub input: SiteSet,
    pub stages: Vec<Stage>,
}

impl ErasureTrace {
    pub fn l_max(&self) -> u64 {
        self.stages.last().map_or(0, |s| s.l)
    }

    /// `E_l` reconstructed from the input and the erased sets.
    pub fn residual_at(&self, l: u64) -> SiteSet {
        let mut gone: Vec<i64> = self
            .stages
            .iter()
            .take_while(|s| s.l <= l)
            .flat_map(|s| s.erased.iter().copied())
            .collect();
        gone.sort_unstable();
        let left = self
            .input
            .members()
            .iter()
            .copied()
            .filter(|m| gone.binary_search(m).is_err())
            .collect();
        self.input.with_members(left)
    }

    /// `E_{l_max}`.
    pub fn residual(&self) -> SiteSet {
        self.residual_at(self.l_max())
    }

    pub fn residual_count(&self) -> usize {
        self.stages.last().map_or(self.input.len(), |s| s.residual_count)
    }

    /// All erased islands, ordered by stage.
    pub fn islands(&self) -> impl Iterator<Item = &Island> {
        self.stages.iter().flat_map(|s| s.islands.iter())
    }

    pub const CSV_HEADER: &'static str = "stage_l,islands_erased,sites_erased,residual_count";

    /// Stage 0 is the input itself.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        let _ = writeln!(out, "0,0,0,{}", self.input.len());
        for s in &self.stages {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.l,
                s.islands.len(),
                s.erased.len(),
                s.residual_count
            );
        }
        out
    }
}

/// Runs stages `1..=l_max` in order.
pub fn erase_up_to(e: &SiteSet, params: &SparsenessParams, l_max: u64) -> ErasureTrace {
    assert!(l_max >= 1, "l_max starts at 1");
    let mut current = e.clone();
    let mut stages = Vec::with_capacity(l_max as usize);
    for l in 1..=l_max {
        let (islands, next) = if current.is_empty() {
            (Vec::new(), current.clone())
        } else {
            erasure_stage(&current, l, params)
        };
        let erased = if islands.is_empty() {
            Vec::new()
        } else {
            current
                .members()
                .iter()
                .copied()
                .filter(|&m| !next.contains(m))
                .collect()
        };
        stages.push(Stage {
            l,
            islands,
            erased,
            residual_count: next.len(),
        });
        current = next;
    }
    ErasureTrace {
        params: *params,
        input: e.clone(),
        stages,
    }
}

/// The islands produced by a trace, with separation checks and per-site
/// territory counts over the analysis window.
///
/// `islands` is the union of all `J_l`. A short island erased early can
/// lie inside a longer island of a later stage (the later island's end
/// points avoid the short island's territory, but its interior need not),
/// so that family is not always disjoint. `cover` keeps only the islands
/// not contained in another one; it covers the same sites, and since any
/// later island meeting an earlier territory must contain it, its members
/// are pairwise well separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    /// Every island of every stage, sorted.
    pub islands: Vec<Island>,
    /// Whether `islands` is pairwise disjoint and well separated.
    pub separation_ok: bool,
    /// A pair of `islands` that is overlapping or not well separated.
    pub violation: Option<(Island, Island)>,
    /// `islands` without those contained in another island, sorted.
    pub cover: Vec<Island>,
    pub cover_separation_ok: bool,
    pub cover_violation: Option<(Island, Island)>,
    pub residual: SiteSet,
    window_start: i64,
    /// Number of `cover` islands whose territory holds each window site.
    pub territory_multiplicity: Vec<u32>,
    /// Whether every `cover` territory lies inside the analysis window.
    pub territories_inside_window: bool,
}

impl CoverCertificate {
    pub fn multiplicity_at(&self, site: i64) -> u32 {
        usize::try_from(site - self.window_start)
            .ok()
            .and_then(|i| self.territory_multiplicity.get(i).copied())
            .unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.territory_multiplicity.iter().copied().max().unwrap_or(0)
    }

    /// multiplicity -> number of window sites with it.
    pub fn multiplicity_histogram(&self) -> BTreeMap<u32, u64> {
        let mut h = BTreeMap::new();
        for &m in &self.territory_multiplicity {
            *h.entry(m).or_insert(0) += 1;
        }
        h
    }

    pub fn summary_line(&self) -> String {
        format!(
            "islands={} separation_ok={} cover_islands={} cover_separation_ok={} residual_count={} max_territory_multiplicity={} territories_inside_window={}",
            self.islands.len(),
            self.separation_ok,
            self.cover.len(),
            self.cover_separation_ok,
            self.residual.len(),
            self.max_multiplicity(),
            self.territories_inside_window
        )
    }
}

/// Finds a pair violating disjointness or well-separation. For each
/// island, only islands meeting its territory can break the condition, so
/// those are looked up by position instead of scanning all pairs.
fn find_violation(sorted: &[Island], params: &SparsenessParams) -> Option<(Island, Island)> {
    for w in sorted.windows(2) {
        if w[0].overlaps(&w[1]) {
            return Some((w[0], w[1]));
        }
    }
    // disjoint and sorted by start, hence also sorted by end
    for (i, small) in sorted.iter().enumerate() {
        let t = territory(small, params);
        let from = sorted.partition_point(|j| j.end() < *t.start());
        let to = sorted.partition_point(|j| j.start() <= *t.end());
        for (j, other) in sorted.iter().enumerate().take(to).skip(from) {
            if j != i && other.len() >= small.len() {
                return Some((*small, *other));
            }
        }
    }
    None
}

/// The islands of a sorted list not contained in another one.
fn maximal(sorted: &[Island]) -> Vec<Island> {
    // longest first among equal starts, so a contained island always
    // comes after one that contains it
    let mut order = sorted.to_vec();
    order.sort_by_key(|i| (i.start(), std::cmp::Reverse(i.len())));
    let mut out: Vec<Island> = Vec::new();
    let mut reach = i64::MIN;
    for island in order {
        if island.end() > reach {
            reach = island.end();
            out.push(island);
        }
    }
    out
}

pub fn cover_certificate(trace: &ErasureTrace) -> CoverCertificate {
    let mut islands: Vec<Island> = trace.islands().copied().collect();
    islands.sort();
    let violation = find_violation(&islands, &trace.params);
    let cover = maximal(&islands);
    let cover_violation = find_violation(&cover, &trace.params);

    let window = trace.input.window();
    let (w_lo, w_hi) = (*window.start(), *window.end());
    let width = trace.input.window_len();
    let mut delta = vec![0i64; width + 1];
    let mut inside = true;
    for island in &cover {
        let t = territory(island, &trace.params);
        inside &= *t.start() >= w_lo && *t.end() <= w_hi;
        let a = (*t.start()).max(w_lo);
        let b = (*t.end()).min(w_hi);
        if a <= b {
            delta[(a - w_lo) as usize] += 1;
            delta[(b - w_lo) as usize + 1] -= 1;
        }
    }
    let mut running = 0i64;
    let multiplicity = delta[..width]
        .iter()
        .map(|d| {
            running += d;
            running as u32
        })
        .collect();

    CoverCertificate {
        separation_ok: violation.is_none(),
        violation,
        islands,
        cover_separation_ok: cover_violation.is_none(),
        cover_violation,
        cover,
        residual: trace.residual(),
        window_start: w_lo,
        territory_multiplicity: multiplicity,
        territories_inside_window: inside,
    }
}
