//! Binary configurations, radius-`r` rules and their exact evolution.
//!
//! Two kinds of configuration are supported: rings `Z_n` ([`RingConfig`])
//! and finite perturbations of a uniform background on `Z`
//! ([`WindowConfig`]). Both store one bit per cell and step 64 cells per
//! word operation.

mod bits;
mod diagram;
mod ring;
mod rule;
mod window;

pub use bits::BitRow;
pub use diagram::SpaceTimeDiagram;
pub use ring::RingConfig;
pub use rule::{decode_neighborhood, encode_neighborhood, Rule, MAX_RADIUS};
pub use window::WindowConfig;

use std::fmt;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Symbol {
    Zero = 0,
    One = 1,
}

impl Symbol {
    pub fn flip(self) -> Symbol {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
        }
    }

    pub fn is_one(self) -> bool {
        self == Symbol::One
    }

    pub fn as_bit(self) -> u8 {
        self as u8
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::Zero),
            '1' => Some(Symbol::One),
            _ => None,
        }
    }
}

impl From<bool> for Symbol {
    fn from(b: bool) -> Symbol {
        if b {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }
}

impl From<Symbol> for bool {
    fn from(s: Symbol) -> bool {
        s.is_one()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Something a rule can be applied to.
pub trait Configuration: Clone {
    fn step(&self, rule: &Rule) -> Result<Self>;

    /// Half-open range of sites worth drawing.
    fn span(&self) -> (i64, i64);

    fn cell(&self, site: i64) -> Symbol;

    /// Symbol drawn at sites outside [`Configuration::span`].
    fn fill(&self) -> Symbol;
}

/// `Φ^t(config)`.
pub fn evolve<C: Configuration>(rule: &Rule, config: &C, t: usize) -> Result<C> {
    let mut current = config.clone();
    for _ in 0..t {
        current = current.step(rule)?;
    }
    Ok(current)
}

/// `Φ^0(config), ..., Φ^t(config)`.
pub fn evolve_recorded<C: Configuration>(
    rule: &Rule,
    config: &C,
    t: usize,
) -> Result<SpaceTimeDiagram<C>> {
    let mut rows = Vec::with_capacity(t + 1);
    rows.push(config.clone());
    for _ in 0..t {
        let next = rows.last().expect("non-empty").step(rule)?;
        rows.push(next);
    }
    Ok(SpaceTimeDiagram::new(rows))
}

/// Applies `rule` to a row padded with `r` extra cells on each side.
/// Output cell `i` reads `padded[i..=i + 2r]`.
pub(crate) fn apply_padded(rule: &Rule, padded: &BitRow) -> BitRow {
    let r = rule.radius();
    let width = 2 * r + 1;
    debug_assert!(padded.len() >= 2 * r);
    let out_len = padded.len() - 2 * r;
    let mut vars = [0u64; 2 * MAX_RADIUS + 1];
    let mut scratch = Vec::with_capacity(64);
    BitRow::from_word_fn(out_len, |w| {
        let base = w * 64;
        for (j, v) in vars.iter_mut().take(width).enumerate() {
            *v = padded.extract(base + j);
        }
        rule.eval_words(&vars[..width], &mut scratch)
    })
}
