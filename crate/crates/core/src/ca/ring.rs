use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::{apply_padded, BitRow, Configuration, Rule, Symbol};
use crate::error::{Error, Result};

/// `n` cells indexed by `Z_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingConfig {
    cells: BitRow,
}

impl RingConfig {
    pub fn new(cells: BitRow) -> Result<RingConfig> {
        if cells.is_empty() {
            return Err(Error::InvalidArgument("a ring needs at least one cell".into()));
        }
        Ok(RingConfig { cells })
    }

    pub fn uniform(n: usize, s: Symbol) -> Result<RingConfig> {
        RingConfig::new(BitRow::filled(n, s.is_one()))
    }

    pub fn from_symbols(cells: &[Symbol]) -> Result<RingConfig> {
        RingConfig::new(BitRow::from_bools(cells.iter().map(|s| s.is_one())))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> &BitRow {
        &self.cells
    }

    /// Cyclic access: `get(i) == get(i mod n)`.
    pub fn get(&self, i: i64) -> Symbol {
        let n = self.len() as i64;
        Symbol::from(self.cells.get(i.rem_euclid(n) as usize))
    }

    pub fn count_ones(&self) -> usize {
        self.cells.count_ones()
    }

    /// Exact fraction of 1-cells.
    pub fn density(&self) -> Ratio<usize> {
        Ratio::new(self.count_ones(), self.len())
    }

    /// The symbol of a uniform ring, if it is one.
    pub fn uniform_symbol(&self) -> Option<Symbol> {
        if self.cells.all(false) {
            Some(Symbol::Zero)
        } else if self.cells.all(true) {
            Some(Symbol::One)
        } else {
            None
        }
    }

    /// Indices where the two rings disagree.
    pub fn diff(&self, other: &RingConfig) -> Result<Vec<usize>> {
        if self.len() != other.len() {
            return Err(Error::DomainMismatch(format!(
                "ring lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        let mut out = Vec::new();
        for (w, (a, b)) in self
            .cells
            .words()
            .iter()
            .zip(other.cells.words())
            .enumerate()
        {
            let mut x = a ^ b;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        Ok(out)
    }

    pub fn step(&self, rule: &Rule) -> RingConfig {
        let r = rule.radius();
        let n = self.len();
        let mut padded = BitRow::default();
        if n >= r {
            padded.append_range(&self.cells, n - r, r);
            padded.append_range(&self.cells, 0, n);
            padded.append_range(&self.cells, 0, r);
        } else {
            for j in 0..n + 2 * r {
                padded.push(self.get(j as i64 - r as i64).is_one());
            }
        }
        RingConfig {
            cells: apply_padded(rule, &padded),
        }
    }
}

impl Configuration for RingConfig {
    fn step(&self, rule: &Rule) -> Result<Self> {
        Ok(RingConfig::step(self, rule))
    }

    fn span(&self) -> (i64, i64) {
        (0, self.len() as i64)
    }

    fn cell(&self, site: i64) -> Symbol {
        self.get(site)
    }

    fn fill(&self) -> Symbol {
        Symbol::Zero
    }
}

impl FromStr for RingConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<RingConfig> {
        let cells = s
            .trim()
            .chars()
            .map(|c| {
                Symbol::from_char(c)
                    .map(bool::from)
                    .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in ring")))
            })
            .collect::<Result<Vec<bool>>>()?;
        RingConfig::new(BitRow::from_bools(cells))
    }
}

impl fmt::Display for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.cells.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingConfig({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::evolve;

    fn ring(s: &str) -> RingConfig {
        s.parse().unwrap()
    }

    /// Cell-by-cell reference stepping straight from the table.
    fn naive_step(rule: &Rule, x: &RingConfig) -> RingConfig {
        let r = rule.radius() as i64;
        let cells: Vec<Symbol> = (0..x.len() as i64)
            .map(|i| {
                let nb: Vec<Symbol> = (-r..=r).map(|d| x.get(i + d)).collect();
                rule.output(&nb)
            })
            .collect();
        RingConfig::from_symbols(&cells).unwrap()
    }

    #[test]
    fn traffic_examples() {
        let t = Rule::traffic();
        assert_eq!(ring("0100").step(&t), ring("0010"));
        assert_eq!(ring("1111").step(&t), ring("1111"));
        assert_eq!(ring("1100").step(&t), ring("1010"));
    }

    #[test]
    fn density_examples() {
        assert_eq!(ring("00000").density(), Ratio::new(0, 1));
        assert_eq!(ring("10101").density(), Ratio::new(3, 5));
        assert_eq!(ring("1100").density(), Ratio::new(1, 2));
    }

    #[test]
    fn diff_examples() {
        let x = ring("1100");
        assert!(x.diff(&x).unwrap().is_empty());
        assert_eq!(x.diff(&ring("1010")).unwrap(), vec![1, 2]);
        assert!(matches!(
            x.diff(&ring("110")),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn uniform_rings_are_fixed() {
        for rule in [Rule::gkl(), Rule::modified_traffic()] {
            for s in [Symbol::Zero, Symbol::One] {
                let x = RingConfig::uniform(77, s).unwrap();
                assert_eq!(x.step(&rule), x);
            }
        }
    }

    #[test]
    fn packed_step_matches_naive_on_tiny_and_odd_rings() {
        let rules = [Rule::gkl(), Rule::modified_traffic(), Rule::traffic()];
        let patterns = ["1", "10", "110", "1011001", "0110100111010001011"];
        for rule in &rules {
            for p in patterns {
                let x = ring(p);
                assert_eq!(x.step(rule), naive_step(rule, &x), "{} on {p}", rule.name());
            }
        }
        // a ring spanning several words
        let long: String = (0..200).map(|i| if (i * 7 + i / 5) % 3 == 0 { '1' } else { '0' }).collect();
        let x = ring(&long);
        for rule in &rules {
            assert_eq!(x.step(rule), naive_step(rule, &x));
            assert_eq!(
                evolve(rule, &x, 5).unwrap(),
                (0..5).fold(x.clone(), |y, _| naive_step(rule, &y))
            );
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("01x".parse::<RingConfig>().is_err());
        assert!("".parse::<RingConfig>().is_err());
    }
}
