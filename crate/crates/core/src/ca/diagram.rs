use std::fmt::Write as _;

use super::{Configuration, Symbol};

/// Rows `Φ^0 x, Φ^1 x, ..., Φ^t x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeDiagram<C> {
    rows: Vec<C>,
}

impl<C: Configuration> SpaceTimeDiagram<C> {
    pub fn new(rows: Vec<C>) -> Self {
        assert!(!rows.is_empty(), "a diagram has at least its initial row");
        SpaceTimeDiagram { rows }
    }

    pub fn rows(&self) -> &[C] {
        &self.rows
    }

    pub fn t_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn last(&self) -> &C {
        self.rows.last().expect("non-empty")
    }

    /// Union of all row spans, so site `i` is drawn in the same column
    /// in every row.
    pub fn columns(&self) -> (i64, i64) {
        self.rows.iter().map(|r| r.span()).fold(
            (i64::MAX, i64::MIN),
            |(lo, hi), (a, b)| (lo.min(a), hi.max(b)),
        )
    }

    /// Plain PBM (`P1`): one image row per time step, time going down,
    /// 1 drawn black. Each comment line is emitted as `# ...` after the
    /// magic number.
    pub fn to_pbm(&self, comments: &[String]) -> String {
        let (lo, hi) = self.columns();
        let width = (hi - lo).max(0) as usize;
        let mut out = String::with_capacity((width + 1) * self.rows.len() + 64);
        out.push_str("P1\n");
        for c in comments {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "{} {}", width, self.rows.len());
        for row in &self.rows {
            let (a, b) = row.span();
            for site in lo..hi {
                let s = if site >= a && site < b {
                    row.cell(site)
                } else {
                    row.fill()
                };
                out.push(if s == Symbol::One { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca::{evolve_recorded, RingConfig, Rule, WindowConfig};

    #[test]
    fn ring_pbm_layout() {
        let x: RingConfig = "0100".parse().unwrap();
        let d = evolve_recorded(&Rule::traffic(), &x, 2).unwrap();
        assert_eq!(d.t_max(), 2);
        assert_eq!(d.to_pbm(&[]), "P1\n4 3\n0100\n0010\n0001\n");
    }

    #[test]
    fn window_rows_are_aligned_by_site() {
        let x = WindowConfig::with_errors(Symbol::One, &[0]);
        let d = evolve_recorded(&Rule::and_erosion(), &x, 2).unwrap();
        let pbm = d.to_pbm(&["rule=and_erosion".into()]);
        let lines: Vec<&str> = pbm.lines().collect();
        assert_eq!(lines[1], "# rule=and_erosion");
        assert_eq!(lines[2], "5 3");
        assert_eq!(&lines[3..], &["11011", "10001", "00000"]);
    }
}
