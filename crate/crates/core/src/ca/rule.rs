//! Radius-`r` binary local rules stored as complete lookup tables.
//!
//! A neighborhood `(x_{i-r}, ..., x_{i+r})` is indexed by reading it as a
//! binary number with `x_{i-r}` as the most significant bit, so the
//! neighborhood `(0,0,0,1,1,0,1)` has index `0b0001101`.
//!
//! Each rule also carries a reduced decision diagram of its table, used to
//! evaluate 64 cells at once on packed words.

use std::collections::HashMap;
use std::fmt;

use super::Symbol;
use crate::error::{Error, Result};

/// Largest radius the engine accepts (a table of 2^9 entries).
pub const MAX_RADIUS: usize = 4;

#[derive(Clone)]
pub struct Rule {
    name: String,
    radius: usize,
    table: Vec<Symbol>,
    circuit: Circuit,
}

impl PartialEq for Rule {
    /// Rules are equal when their tables are; names are labels only.
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && self.table == other.table
    }
}

impl Eq for Rule {}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table: String = self.table.iter().map(|s| s.as_char()).collect();
        f.debug_struct("Rule")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("table", &table)
            .finish()
    }
}

/// Decodes a neighborhood index into its `2r + 1` symbols, leftmost first.
pub fn decode_neighborhood(index: usize, radius: usize) -> Vec<Symbol> {
    let width = 2 * radius + 1;
    (0..width)
        .map(|j| Symbol::from((index >> (width - 1 - j)) & 1 == 1))
        .collect()
}

/// Inverse of [`decode_neighborhood`].
pub fn encode_neighborhood(cells: &[Symbol]) -> usize {
    cells
        .iter()
        .fold(0usize, |acc, &s| (acc << 1) | s.as_bit() as usize)
}

fn maj(a: Symbol, b: Symbol, c: Symbol) -> Symbol {
    Symbol::from(a.as_bit() + b.as_bit() + c.as_bit() >= 2)
}

impl Rule {
    pub fn from_table(name: impl Into<String>, radius: usize, table: Vec<Symbol>) -> Result<Rule> {
        if radius > MAX_RADIUS {
            return Err(Error::InvalidRule(format!(
                "radius {radius} exceeds the engine limit {MAX_RADIUS}"
            )));
        }
        let expected = 1usize << (2 * radius + 1);
        if table.len() != expected {
            return Err(Error::InvalidRule(format!(
                "radius {radius} needs {expected} table entries, got {}",
                table.len()
            )));
        }
        let circuit = Circuit::compile(&table, 2 * radius + 1);
        Ok(Rule {
            name: name.into(),
            radius,
            table,
            circuit,
        })
    }

    /// Tabulates `f` over every neighborhood; `f` sees `x_{i-r}..=x_{i+r}`.
    pub fn from_fn(
        name: impl Into<String>,
        radius: usize,
        f: impl Fn(&[Symbol]) -> Symbol,
    ) -> Result<Rule> {
        if radius > MAX_RADIUS {
            return Err(Error::InvalidRule(format!(
                "radius {radius} exceeds the engine limit {MAX_RADIUS}"
            )));
        }
        let size = 1usize << (2 * radius + 1);
        let table = (0..size)
            .map(|idx| f(&decode_neighborhood(idx, radius)))
            .collect();
        Rule::from_table(name, radius, table)
    }

    /// Gács–Kurdyumov–Levin: majority of `(x_{i-3}, x_{i-1}, x_i)` on a 0 cell,
    /// of `(x_i, x_{i+1}, x_{i+3})` on a 1 cell.
    pub fn gkl() -> Rule {
        Rule::from_fn("gkl", 3, |n| match n[3] {
            Symbol::Zero => maj(n[0], n[2], n[3]),
            Symbol::One => maj(n[3], n[4], n[6]),
        })
        .expect("radius 3 is valid")
    }

    /// Every `10` becomes `01` simultaneously (elementary rule 184).
    pub fn traffic() -> Rule {
        Rule::from_fn("traffic", 1, |n| {
            let (l, c, r) = (n[0].is_one(), n[1].is_one(), n[2].is_one());
            Symbol::from((c && r) || (l && !c))
        })
        .expect("radius 1 is valid")
    }

    /// Deletes the `1` in `0010` and fills the `0` in `1011`.
    pub fn smoothing() -> Rule {
        use Symbol::{One, Zero};
        Rule::from_fn("smoothing", 2, |n| match (n[0], n[1], n[2], n[3], n[4]) {
            (Zero, Zero, One, Zero, _) => Zero,
            (_, One, Zero, One, One) => One,
            (_, _, c, _, _) => c,
        })
        .expect("radius 2 is valid")
    }

    /// Traffic followed by smoothing, tabulated as one radius-3 rule.
    pub fn modified_traffic() -> Rule {
        Rule::traffic()
            .then(&Rule::smoothing())
            .expect("combined radius 3 is valid")
            .renamed("modified_traffic")
    }

    /// `x_{i-1} AND x_i AND x_{i+1}`.
    pub fn and_erosion() -> Rule {
        Rule::from_fn("and_erosion", 1, |n| {
            Symbol::from(n.iter().all(|s| s.is_one()))
        })
        .expect("radius 1 is valid")
    }

    /// `x_{i-1} OR x_i OR x_{i+1}`.
    pub fn or_erosion() -> Rule {
        Rule::from_fn("or_erosion", 1, |n| {
            Symbol::from(n.iter().any(|s| s.is_one()))
        })
        .expect("radius 1 is valid")
    }

    /// Elementary (radius-1) rule by Wolfram code.
    pub fn elementary(code: u8) -> Rule {
        Rule::from_fn(format!("rule{code}"), 1, |n| {
            Symbol::from((code >> encode_neighborhood(n)) & 1 == 1)
        })
        .expect("radius 1 is valid")
    }

    /// Looks up a built-in rule: `gkl`, `traffic`, `smoothing`,
    /// `modified_traffic`, `and_erosion`, `or_erosion` or `ruleNNN`.
    pub fn by_name(name: &str) -> Result<Rule> {
        match name {
            "gkl" => Ok(Rule::gkl()),
            "traffic" => Ok(Rule::traffic()),
            "smoothing" => Ok(Rule::smoothing()),
            "modified_traffic" => Ok(Rule::modified_traffic()),
            "and_erosion" => Ok(Rule::and_erosion()),
            "or_erosion" => Ok(Rule::or_erosion()),
            other => other
                .strip_prefix("rule")
                .and_then(|code| code.parse::<u8>().ok())
                .map(Rule::elementary)
                .ok_or_else(|| Error::UnknownRule(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Rule {
        self.name = name.into();
        self
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    pub fn output_at(&self, index: usize) -> Symbol {
        self.table[index]
    }

    /// Output for a neighborhood given leftmost first. Panics on a wrong width.
    pub fn output(&self, neighborhood: &[Symbol]) -> Symbol {
        assert_eq!(neighborhood.len(), 2 * self.radius + 1, "neighborhood width");
        self.table[encode_neighborhood(neighborhood)]
    }

    /// Whether the uniform configuration of `s` is a fixed point.
    pub fn fixes(&self, s: Symbol) -> bool {
        let all = if s.is_one() { self.table.len() - 1 } else { 0 };
        self.table[all] == s
    }

    /// Exchange 0 with 1 and left with right.
    pub fn conjugate(&self) -> Rule {
        let width = 2 * self.radius + 1;
        let mask = (1usize << width) - 1;
        let table = (0..self.table.len())
            .map(|idx| {
                let mirrored = reverse_bits(idx, width) ^ mask;
                self.table[mirrored].flip()
            })
            .collect();
        Rule::from_table(format!("conj({})", self.name), self.radius, table)
            .expect("same shape as a valid rule")
    }

    /// The rule applying `self` first and then `next`.
    pub fn then(&self, next: &Rule) -> Result<Rule> {
        let r1 = self.radius;
        let r2 = next.radius;
        let radius = r1 + r2;
        Rule::from_fn(format!("{}>{}", self.name, next.name), radius, |n| {
            let mid: Vec<Symbol> = (0..=2 * r2)
                .map(|j| self.output(&n[j..j + 2 * r1 + 1]))
                .collect();
            next.output(&mid)
        })
    }

    /// Evaluates the rule on 64 cells at once. `vars[j]` holds, for each
    /// lane, the cell at offset `j - r`.
    #[inline]
    pub(crate) fn eval_words(&self, vars: &[u64], scratch: &mut Vec<u64>) -> u64 {
        self.circuit.eval(vars, scratch)
    }
}

fn reverse_bits(x: usize, width: usize) -> usize {
    (0..width).fold(0, |acc, j| (acc << 1) | ((x >> j) & 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Ref {
    Const(bool),
    Gate(usize),
}

#[derive(Clone, Debug)]
struct Gate {
    var: usize,
    hi: Ref,
    lo: Ref,
}

/// Reduced, shared decision diagram over the neighborhood variables,
/// topologically ordered so gates can be evaluated front to back.
#[derive(Clone, Debug)]
struct Circuit {
    gates: Vec<Gate>,
    root: Ref,
}

impl Circuit {
    fn compile(table: &[Symbol], width: usize) -> Circuit {
        let mut gates = Vec::new();
        let mut memo: HashMap<(Ref, Ref, usize), usize> = HashMap::new();
        let root = Self::build(table, 0, width, &mut gates, &mut memo);
        Circuit { gates, root }
    }

    fn build(
        table: &[Symbol],
        var: usize,
        width: usize,
        gates: &mut Vec<Gate>,
        memo: &mut HashMap<(Ref, Ref, usize), usize>,
    ) -> Ref {
        if var == width {
            return Ref::Const(table[0].is_one());
        }
        let half = table.len() / 2;
        let lo = Self::build(&table[..half], var + 1, width, gates, memo);
        let hi = Self::build(&table[half..], var + 1, width, gates, memo);
        if lo == hi {
            return lo;
        }
        let id = *memo.entry((hi, lo, var)).or_insert_with(|| {
            gates.push(Gate { var, hi, lo });
            gates.len() - 1
        });
        Ref::Gate(id)
    }

    #[inline]
    fn eval(&self, vars: &[u64], regs: &mut Vec<u64>) -> u64 {
        regs.clear();
        let get = |r: Ref, regs: &[u64]| match r {
            Ref::Const(true) => !0u64,
            Ref::Const(false) => 0,
            Ref::Gate(i) => regs[i],
        };
        for g in &self.gates {
            let v = vars[g.var];
            let out = (v & get(g.hi, regs)) | (!v & get(g.lo, regs));
            regs.push(out);
        }
        get(self.root, regs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Symbol::{One, Zero};

    fn syms(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::from(c == '1')).collect()
    }

    #[test]
    fn gkl_examples() {
        let gkl = Rule::gkl();
        assert_eq!(gkl.radius(), 3);
        assert_eq!(gkl.output(&syms("0000000")), Zero);
        assert_eq!(gkl.output(&syms("0001101")), One);
        assert_eq!(gkl.output(&syms("1010000")), One);
    }

    #[test]
    fn traffic_is_rule_184() {
        assert_eq!(Rule::traffic(), Rule::elementary(184));
    }

    #[test]
    fn smoothing_clauses() {
        let s = Rule::smoothing();
        assert_eq!(s.output(&syms("00100")), Zero);
        assert_eq!(s.output(&syms("00101")), Zero);
        assert_eq!(s.output(&syms("01011")), One);
        assert_eq!(s.output(&syms("11011")), One);
        assert_eq!(s.output(&syms("01100")), One);
        assert_eq!(s.output(&syms("10010")), Zero);
    }

    #[test]
    fn and_erosion_examples() {
        let r = Rule::and_erosion();
        assert_eq!(r.output(&syms("111")), One);
        assert_eq!(r.output(&syms("101")), Zero);
        assert_eq!(r.output(&syms("011")), Zero);
    }

    #[test]
    fn conjugate_of_and_is_or() {
        assert_eq!(Rule::and_erosion().conjugate(), Rule::or_erosion());
    }

    #[test]
    fn conjugation_is_an_involution_on_all_elementary_rules() {
        for code in 0..=255u8 {
            let r = Rule::elementary(code);
            assert_eq!(r.conjugate().conjugate(), r, "rule {code}");
        }
    }

    #[test]
    fn table_shape_is_checked() {
        assert!(Rule::from_table("bad", 1, vec![Zero; 7]).is_err());
        assert!(Rule::from_table("big", 5, vec![Zero; 1 << 11]).is_err());
    }

    #[test]
    fn circuit_agrees_with_table_lane_by_lane() {
        let mut scratch = Vec::new();
        for rule in [Rule::gkl(), Rule::modified_traffic(), Rule::smoothing()] {
            let width = 2 * rule.radius() + 1;
            // one lane per neighborhood index
            for chunk in (0..rule.table().len()).collect::<Vec<_>>().chunks(64) {
                let vars: Vec<u64> = (0..width)
                    .map(|j| {
                        chunk.iter().enumerate().fold(0u64, |acc, (lane, &idx)| {
                            acc | ((((idx >> (width - 1 - j)) & 1) as u64) << lane)
                        })
                    })
                    .collect();
                let out = rule.eval_words(&vars, &mut scratch);
                for (lane, &idx) in chunk.iter().enumerate() {
                    assert_eq!((out >> lane) & 1 == 1, rule.output_at(idx).is_one());
                }
            }
        }
    }

    #[test]
    fn unknown_rule_name() {
        assert!(matches!(Rule::by_name("nope"), Err(Error::UnknownRule(_))));
        assert_eq!(Rule::by_name("rule184").unwrap(), Rule::traffic());
    }
}
