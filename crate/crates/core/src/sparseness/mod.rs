//! Sparse subsets of `Z` and the staged island-erasure procedure.
//!
//! An island is a finite interval; with sparseness parameter `k`, the
//! territory of an island of length `l` is every site within distance
//! `k * l` of it. Two disjoint islands are well separated when the longer
//! one stays out of the territory of the shorter one. Stage `l` of the
//! erasure procedure removes, all at once, every length-`l` island that
//! meets the current set and whose territory holds no other member.
//!
//! Everything here works on a finite analysis window. [`OutsideMode`]
//! says what the sites beyond it are taken to be.

mod bruteforce;
mod erasure;
mod stats;

pub use bruteforce::{find_cover_bruteforce, MAX_BRUTEFORCE_WINDOW};
pub use erasure::{cover_certificate, erase_up_to, erasure_stage, CoverCertificate, ErasureTrace, Stage};
pub use stats::{sample_sparseness_stats, SparsenessStats};

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The interval `[start, start + len - 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Island {
    start: i64,
    len: u64,
}

impl Island {
    pub fn new(start: i64, len: u64) -> Result<Island> {
        if len == 0 {
            return Err(Error::InvalidArgument("an island has positive length".into()));
        }
        Ok(Island { start, len })
    }

    /// The island `[first, last]`.
    pub fn spanning(first: i64, last: i64) -> Result<Island> {
        if last < first {
            return Err(Error::InvalidArgument(format!("empty interval [{first}, {last}]")));
        }
        Island::new(first, (last - first + 1) as u64)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Last site, inclusive.
    pub fn end(&self) -> i64 {
        self.start + self.len as i64 - 1
    }

    pub fn contains(&self, site: i64) -> bool {
        site >= self.start && site <= self.end()
    }

    pub fn overlaps(&self, other: &Island) -> bool {
        self.start <= other.end() && other.start <= self.end()
    }

    pub fn intersects_range(&self, range: &RangeInclusive<i64>) -> bool {
        self.start <= *range.end() && *range.start() <= self.end()
    }
}

impl fmt::Debug for Island {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SparsenessParams {
    k: u64,
}

impl SparsenessParams {
    pub fn new(k: u64) -> Result<SparsenessParams> {
        if k == 0 {
            return Err(Error::InvalidArgument("sparseness parameter k must be at least 1".into()));
        }
        Ok(SparsenessParams { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Territory radius of an island of length `l`.
    pub fn reach(&self, l: u64) -> i64 {
        (self.k * l) as i64
    }
}

/// How sites beyond the analysis window are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OutsideMode {
    /// Outside sites are not members.
    #[default]
    Empty,
    /// Outside sites are unknown: an island whose territory leaves the
    /// window is never accepted.
    Unknown,
}

impl FromStr for OutsideMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutsideMode> {
        match s {
            "empty" => Ok(OutsideMode::Empty),
            "unknown" => Ok(OutsideMode::Unknown),
            other => Err(Error::InvalidArgument(format!(
                "outside mode must be `empty` or `unknown`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for OutsideMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutsideMode::Empty => "empty",
            OutsideMode::Unknown => "unknown",
        })
    }
}

/// A finite set of sites inside an inclusive analysis window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SiteSet {
    window: RangeInclusive<i64>,
    members: Vec<i64>,
    outside: OutsideMode,
}

impl SiteSet {
    pub fn new(
        window: RangeInclusive<i64>,
        members: impl IntoIterator<Item = i64>,
        outside: OutsideMode,
    ) -> Result<SiteSet> {
        let mut members: Vec<i64> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|m| !window.contains(m)) {
            return Err(Error::InvalidArgument(format!(
                "site {bad} lies outside the window [{}, {}]",
                window.start(),
                window.end()
            )));
        }
        Ok(SiteSet {
            window,
            members,
            outside,
        })
    }

    /// Parses a 0/1 string; site `start + i` is a member iff character `i`
    /// is `1`. Whitespace is ignored.
    pub fn parse(start: i64, s: &str, outside: OutsideMode) -> Result<SiteSet> {
        let mut members = Vec::new();
        let mut width = 0i64;
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => {}
                '1' => members.push(start + width),
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in site set"
                    )))
                }
            }
            width += 1;
        }
        if width == 0 {
            return Err(Error::Parse("empty site set input".into()));
        }
        SiteSet::new(start..=start + width - 1, members, outside)
    }

    pub fn window(&self) -> &RangeInclusive<i64> {
        &self.window
    }

    pub fn window_len(&self) -> usize {
        (self.window.end() - self.window.start() + 1).max(0) as usize
    }

    pub fn outside(&self) -> OutsideMode {
        self.outside
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, site: i64) -> bool {
        self.members.binary_search(&site).is_ok()
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Same window and mode, different members.
    pub(crate) fn with_members(&self, members: Vec<i64>) -> SiteSet {
        SiteSet {
            window: self.window.clone(),
            members,
            outside: self.outside,
        }
    }
}

impl fmt::Debug for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SiteSet([{}, {}], {:?}, {})",
            self.window.start(),
            self.window.end(),
            self.members,
            self.outside
        )
    }
}

/// `[start - k l, end + k l]`.
pub fn territory(island: &Island, params: &SparsenessParams) -> RangeInclusive<i64> {
    let reach = params.reach(island.len());
    island.start() - reach..=island.end() + reach
}

/// Whether two disjoint islands are well separated: the longer one avoids
/// the territory of the shorter one. For equal lengths both directions
/// are checked.
pub fn well_separated(a: &Island, b: &Island, params: &SparsenessParams) -> Result<bool> {
    if a.overlaps(b) {
        return Err(Error::OverlappingIslands(a.start(), a.end(), b.start(), b.end()));
    }
    let mut ok = true;
    if a.len() <= b.len() {
        ok &= !b.intersects_range(&territory(a, params));
    }
    if b.len() <= a.len() {
        ok &= !a.intersects_range(&territory(b, params));
    }
    Ok(ok)
}
