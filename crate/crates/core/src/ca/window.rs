use std::fmt;

use super::{apply_padded, BitRow, Configuration, Rule, Symbol};
use crate::error::{Error, Result};

/// A configuration on `Z` equal to `background` outside the half-open
/// support window `[start, start + cells.len())`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WindowConfig {
    background: Symbol,
    start: i64,
    cells: BitRow,
}

impl WindowConfig {
    pub fn new(background: Symbol, start: i64, cells: BitRow) -> WindowConfig {
        WindowConfig {
            background,
            start,
            cells,
        }
    }

    /// The uniform configuration with an empty support window.
    pub fn uniform(background: Symbol) -> WindowConfig {
        WindowConfig::new(background, 0, BitRow::default())
    }

    /// Background everywhere except at `sites`, which hold the other symbol.
    pub fn with_errors(background: Symbol, sites: &[i64]) -> WindowConfig {
        let (Some(&lo), Some(&hi)) = (sites.iter().min(), sites.iter().max()) else {
            return WindowConfig::uniform(background);
        };
        let mut cells = BitRow::filled((hi - lo + 1) as usize, background.is_one());
        for &s in sites {
            cells.set((s - lo) as usize, background.flip().is_one());
        }
        WindowConfig::new(background, lo, cells)
    }

    /// Parses a 0/1 string placed at `start`.
    pub fn parse(background: Symbol, start: i64, s: &str) -> Result<WindowConfig> {
        let cells = s
            .trim()
            .chars()
            .map(|c| {
                Symbol::from_char(c)
                    .map(bool::from)
                    .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in window")))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(WindowConfig::new(background, start, BitRow::from_bools(cells)))
    }

    pub fn background(&self) -> Symbol {
        self.background
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last site of the support window.
    pub fn end(&self) -> i64 {
        self.start + self.cells.len() as i64
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &BitRow {
        &self.cells
    }

    pub fn get(&self, site: i64) -> Symbol {
        if site >= self.start && site < self.end() {
            Symbol::from(self.cells.get((site - self.start) as usize))
        } else {
            self.background
        }
    }

    /// True when the configuration equals the background on all of `Z`.
    pub fn is_background(&self) -> bool {
        self.cells.all(self.background.is_one())
    }

    /// Sites disagreeing with the background, ascending.
    pub fn errors(&self) -> Vec<i64> {
        let bg = self.background.is_one();
        self.cells
            .iter()
            .enumerate()
            .filter(|&(_, b)| b != bg)
            .map(|(i, _)| self.start + i as i64)
            .collect()
    }

    /// Sites where the two configurations disagree. Both must share a
    /// background, otherwise the difference is infinite.
    pub fn diff(&self, other: &WindowConfig) -> Result<Vec<i64>> {
        if self.background != other.background {
            return Err(Error::DomainMismatch(
                "windows over different backgrounds differ at infinitely many sites".into(),
            ));
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        Ok((lo..hi).filter(|&i| self.get(i) != other.get(i)).collect())
    }

    pub fn shifted(&self, by: i64) -> WindowConfig {
        WindowConfig::new(self.background, self.start + by, self.cells.clone())
    }

    /// Exchange 0 with 1 and mirror site `i` to `-i`.
    pub fn conjugate(&self) -> WindowConfig {
        let n = self.cells.len();
        let cells = BitRow::from_bools((0..n).rev().map(|i| !self.cells.get(i)));
        WindowConfig::new(self.background.flip(), -(self.end() - 1), cells)
    }

    /// One exact step on `Z`. The window grows by `r` on each side.
    pub fn step(&self, rule: &Rule) -> Result<WindowConfig> {
        if !rule.fixes(self.background) {
            return Err(Error::NonFixedBackground {
                rule: rule.name().to_string(),
                background: self.background,
            });
        }
        let r = rule.radius();
        let bg = self.background.is_one();
        let mut padded = BitRow::default();
        padded.append_fill(bg, 2 * r);
        padded.append_range(&self.cells, 0, self.cells.len());
        padded.append_fill(bg, 2 * r);
        Ok(WindowConfig::new(
            self.background,
            self.start - r as i64,
            apply_padded(rule, &padded),
        ))
    }
}

impl Configuration for WindowConfig {
    fn step(&self, rule: &Rule) -> Result<Self> {
        WindowConfig::step(self, rule)
    }

    fn span(&self) -> (i64, i64) {
        (self.start, self.end())
    }

    fn cell(&self, site: i64) -> Symbol {
        self.get(site)
    }

    fn fill(&self) -> Symbol {
        self.background
    }
}

impl fmt::Debug for WindowConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.cells.iter().map(|b| if b { '1' } else { '0' }).collect();
        write!(
            f,
            "WindowConfig(bg={}, start={}, {s})",
            self.background, self.start
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{evolve, RingConfig};
    use Symbol::{One, Zero};

    #[test]
    fn smoothing_erases_isolated_symbols() {
        let s = Rule::smoothing();
        let x = WindowConfig::with_errors(Zero, &[0]);
        assert!(x.step(&s).unwrap().is_background());
        let y = WindowConfig::with_errors(One, &[0]);
        assert!(y.step(&s).unwrap().is_background());
    }

    #[test]
    fn and_erosion_spreads_a_zero() {
        let x = WindowConfig::with_errors(One, &[0]);
        let y = x.step(&Rule::and_erosion()).unwrap();
        assert_eq!(y.errors(), vec![-1, 0, 1]);
    }

    #[test]
    fn empty_perturbation_is_fixed() {
        for rule in [Rule::gkl(), Rule::modified_traffic()] {
            for bg in [Zero, One] {
                let x = WindowConfig::uniform(bg);
                assert!(x.step(&rule).unwrap().is_background());
            }
        }
    }

    #[test]
    fn non_fixed_background_is_rejected() {
        // rule 1 maps 000 to 1
        let x = WindowConfig::uniform(Zero);
        assert!(matches!(
            x.step(&Rule::elementary(1)),
            Err(Error::NonFixedBackground { .. })
        ));
    }

    #[test]
    fn diff_examples() {
        let x = WindowConfig::with_errors(Zero, &[3, 7]);
        assert_eq!(x.diff(&WindowConfig::uniform(Zero)).unwrap(), vec![3, 7]);
        assert!(x.diff(&x).unwrap().is_empty());
        assert!(x.diff(&WindowConfig::uniform(One)).is_err());
    }

    #[test]
    fn gkl_single_one_is_gone_within_two_steps() {
        let x = WindowConfig::with_errors(Zero, &[0]);
        assert!(evolve(&Rule::gkl(), &x, 2).unwrap().is_background());
    }

    #[test]
    fn conjugate_round_trip() {
        let x = WindowConfig::parse(Zero, -2, "10011").unwrap();
        let c = x.conjugate();
        assert_eq!(c.background(), One);
        for i in -10..10 {
            assert_eq!(c.get(-i), x.get(i).flip());
        }
        assert_eq!(c.conjugate(), x);
    }

    #[test]
    fn window_matches_large_ring() {
        let rule = Rule::gkl();
        let x = WindowConfig::parse(Zero, 0, "1101001110001").unwrap();
        let t = 6;
        let pad = 3 * t + 5;
        let mut ring_cells = vec![Zero; pad];
        ring_cells.extend((0..x.width() as i64).map(|i| x.get(i)));
        ring_cells.extend(vec![Zero; pad]);
        let ring = RingConfig::from_symbols(&ring_cells).unwrap();
        let on_ring = evolve(&rule, &ring, t).unwrap();
        let on_window = evolve(&rule, &x, t).unwrap();
        for site in on_window.start()..on_window.end() {
            assert_eq!(on_window.get(site), on_ring.get(site + pad as i64));
        }
    }
}
