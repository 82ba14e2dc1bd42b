//! Exact quantities behind the survival bound for the erasure procedure on
//! Bernoulli sets: checkpoint lengths `l_m = (4k+3)^(m-1)`, candidate
//! explanation-tree counts `f_m`, `alpha = p (2k)^2`, the bound
//! `alpha^(2^n)` on surviving to checkpoint `n`, and the tail
//! `sum_{n >= m} (2k l_n + 1) alpha^(2^n)`.
//!
//! All arithmetic is on big integers and big rationals.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Exponents `2^n` are only materialised up to this `n`.
pub const MAX_DOUBLING: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    k: u64,
    p: BigRational,
}

impl BoundParams {
    pub fn new(k: u64, p: BigRational) -> Result<BoundParams> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if p.is_negative() || p > BigRational::one() {
            return Err(Error::InvalidArgument(format!("p = {p} is not in [0, 1]")));
        }
        Ok(BoundParams { k, p })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }
}

/// Parses `"3/1000"`, `"0.001"`, `"1e-3"`, `"2.5E2"` or an integer exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * ten.pow(scale as u32))
    } else {
        BigRational::new(all, ten.pow((-scale) as u32))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn rat_pow(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

fn two_pow(n: u32) -> Result<u32> {
    if n > MAX_DOUBLING {
        return Err(Error::TooLarge(format!(
            "exponent 2^{n} (limit is n <= {MAX_DOUBLING})"
        )));
    }
    Ok(1u32 << n)
}

/// `l_1, ..., l_n` with `l_m = (4k+3)^(m-1)`.
pub fn checkpoint_lengths(k: u64, n: u32) -> Vec<BigUint> {
    let base = big(4 * k + 3);
    (0..n).map(|e| base.clone().pow(e)).collect()
}

/// Checks `l_m / 2 >= 2 (k + 1/2) (l_{m-1} + ... + l_1)` for every `m`,
/// in integers as `l_m >= (4k + 2) (l_1 + ... + l_{m-1})`.
pub fn separation_system_holds(k: u64, lengths: &[BigUint]) -> bool {
    let factor = big(4 * k + 2);
    let mut prefix = BigUint::zero();
    for l in lengths {
        if *l < &factor * &prefix {
            return false;
        }
        prefix += l;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountKind {
    /// Enumerated tree by tree.
    Exact,
    /// `f_0 = 1`, `f_m = 2k l_m f_{m-1}^2`.
    Recursion,
    /// `(2k)^(2^(m+1))`.
    ClosedForm,
    /// `(2k (4k+3))^(2^m)`.
    CorrectedClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCount {
    pub m: u32,
    pub kind: CountKind,
    pub value: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCountBounds {
    pub recursion: TreeCount,
    pub closed_form: TreeCount,
    pub corrected: TreeCount,
}

impl TreeCountBounds {
    /// Whether `f_m <= (2k)^(2^(m+1))`. This fails for larger `m`; see
    /// [`TreeCountBounds::corrected`] for a bound that always holds.
    pub fn closed_form_holds(&self) -> bool {
        self.recursion.value <= self.closed_form.value
    }
}

/// `f_m` from the recursion.
pub fn tree_count_recursion(k: u64, m: u32) -> BigUint {
    let lengths = checkpoint_lengths(k, m);
    let two_k = big(2 * k);
    lengths
        .iter()
        .fold(BigUint::one(), |f, l| &two_k * l * &f * &f)
}

pub fn tree_count_bound(k: u64, m: u32) -> Result<TreeCountBounds> {
    let e_closed = two_pow(m + 1)?;
    let e_corrected = two_pow(m)?;
    Ok(TreeCountBounds {
        recursion: TreeCount {
            m,
            kind: CountKind::Recursion,
            value: tree_count_recursion(k, m),
        },
        closed_form: TreeCount {
            m,
            kind: CountKind::ClosedForm,
            value: big(2 * k).pow(e_closed),
        },
        corrected: TreeCount {
            m,
            kind: CountKind::CorrectedClosedForm,
            value: big(2 * k * (4 * k + 3)).pow(e_corrected),
        },
    })
}

/// Counts candidate explanation trees of depth `m` rooted at site 0 by
/// listing them. A node at height `j` keeps its own position for its left
/// child and places its right child at offset `d` with
/// `l_j / 2 < |d| <= (k + 1/2) l_j`. Leaves are not required to be
/// distinct.
pub fn brute_count_candidate_trees(k: u64, m: u32) -> Result<TreeCount> {
    if m > 2 || k > 4 {
        return Err(Error::TooLarge(format!(
            "tree enumeration for k = {k}, m = {m} (limit is m <= 2, k <= 4)"
        )));
    }
    let lengths: Vec<i64> = (0..m).map(|e| (4 * k as i64 + 3).pow(e)).collect();

    // Every tree as the list of its node positions in breadth-first order.
    fn trees(height: usize, root: i64, lengths: &[i64], k: i64) -> Vec<Vec<i64>> {
        if height == 0 {
            return vec![vec![root]];
        }
        let l = lengths[height - 1];
        let span = (k + 1) * l;
        let mut out = Vec::new();
        for d in -span..=span {
            // l/2 < |d| <= (k + 1/2) l, doubled
            if 2 * d.abs() <= l || 2 * d.abs() > (2 * k + 1) * l {
                continue;
            }
            let child = root + d;
            let left = trees(height - 1, root, lengths, k);
            let right = trees(height - 1, child, lengths, k);
            for a in &left {
                for b in &right {
                    let mut t = vec![root];
                    t.extend_from_slice(a);
                    t.extend_from_slice(b);
                    out.push(t);
                }
            }
        }
        out
    }

    let all = trees(m as usize, 0, &lengths, k as i64);
    Ok(TreeCount {
        m,
        kind: CountKind::Exact,
        value: BigUint::from(all.len()),
    })
}

/// `p (2k)^2`.
pub fn alpha(params: &BoundParams) -> BigRational {
    let two_k = BigInt::from(2 * params.k);
    &params.p * BigRational::from_integer(&two_k * &two_k)
}

/// `(2k)^-2`.
pub fn p_threshold(k: u64) -> BigRational {
    let two_k = BigInt::from(2 * k);
    BigRational::new(BigInt::one(), &two_k * &two_k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnerasedBound {
    pub n: u32,
    /// `alpha^(2^n)`.
    pub alpha_pow: BigRational,
    /// `p^(2^n) f_n`.
    pub sharp: BigRational,
}

/// Bounds on the probability that a site survives to checkpoint `n`.
pub fn unerased_prob_bound(params: &BoundParams, n: u32) -> Result<UnerasedBound> {
    let e = two_pow(n)?;
    let f_n = BigInt::from(tree_count_recursion(params.k, n));
    Ok(UnerasedBound {
        n,
        alpha_pow: rat_pow(&alpha(params), e),
        sharp: rat_pow(&params.p, e) * BigRational::from_integer(f_n),
    })
}

/// Upper bound on `sum_{n >= m} (2k (4k+3)^(n-1) + 1) alpha^(2^n)`: the
/// exact partial sum through `n_stop` plus a geometric majorant for the
/// rest.
///
/// For `n = N + 1 + j`, `2^n >= 2^(N+1) (1 + j)` and
/// `2k L^(n-1) + 1 <= (2k+1) L^(n-1)` with `L = 4k+3`, so the terms are at
/// most `C beta^j` with `C = (2k+1) L^N alpha^(2^(N+1))` and
/// `beta = L alpha^(2^(N+1))`, summing to `C / (1 - beta)`. When
/// `beta >= 1` the exact part is extended until it drops below 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBound {
    pub m: u32,
    /// Last term summed exactly.
    pub n_stop: u32,
    pub partial: BigRational,
    pub constant: BigRational,
    pub ratio: BigRational,
    pub remainder: BigRational,
}

impl TailBound {
    pub fn total(&self) -> BigRational {
        &self.partial + &self.remainder
    }
}

fn tail_term(k: u64, alpha: &BigRational, n: u32) -> Result<BigRational> {
    let l_n = big(4 * k + 3).pow(n - 1);
    let weight = BigInt::from(big(2 * k) * l_n + 1u32);
    Ok(BigRational::from_integer(weight) * rat_pow(alpha, two_pow(n)?))
}

pub fn borel_cantelli_tail(params: &BoundParams, m: u32, n_stop: u32) -> Result<TailBound> {
    if m == 0 {
        return Err(Error::InvalidArgument("the tail starts at m >= 1".into()));
    }
    let a = alpha(params);
    if a >= BigRational::one() {
        return Err(Error::AlphaNotLessThanOne(a.to_string()));
    }
    let k = params.k;
    let big_l = BigRational::from_integer(BigInt::from(4 * k + 3));
    let mut last = n_stop.max(m - 1);
    let (constant, ratio) = loop {
        let pow = rat_pow(&a, two_pow(last + 1)?);
        let ratio = &big_l * &pow;
        if ratio < BigRational::one() {
            let constant = BigRational::from_integer(BigInt::from(2 * k + 1))
                * rat_pow(&big_l, last)
                * pow;
            break (constant, ratio);
        }
        last += 1;
    };
    let mut partial = BigRational::zero();
    for n in m..=last {
        partial += tail_term(k, &a, n)?;
    }
    let remainder = &constant / (BigRational::one() - &ratio);
    Ok(TailBound {
        m,
        n_stop: last,
        partial,
        constant,
        ratio,
        remainder,
    })
}

/// Decimal scientific notation of an exact rational, truncated to
/// `digits` significant digits, e.g. `5.76e-1`.
pub fn to_scientific(x: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.numer().abs();
    let b = x.denom().clone();
    let ten = BigInt::from(10u8);
    let len = |v: &BigInt| v.to_str_radix(10).len() as i64;
    // floor(log10(a / b)) is len(a) - len(b) or one less
    let mut e = len(&a) - len(&b);
    let at_least = |e: i64| {
        if e >= 0 {
            a >= &b * Pow::pow(&ten, e as u32)
        } else {
            &a * Pow::pow(&ten, (-e) as u32) >= b
        }
    };
    if !at_least(e) {
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        (&a * ten.pow(shift as u32)).div_floor(&b)
    } else {
        a.div_floor(&(&b * ten.pow((-shift) as u32)))
    };
    let s = scaled.to_str_radix(10);
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Where `alpha` sits relative to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdStatus {
    Below,
    At,
    Above,
}

impl ThresholdStatus {
    pub fn of(params: &BoundParams) -> ThresholdStatus {
        match alpha(params).cmp(&BigRational::one()) {
            std::cmp::Ordering::Less => ThresholdStatus::Below,
            std::cmp::Ordering::Equal => ThresholdStatus::At,
            std::cmp::Ordering::Greater => ThresholdStatus::Above,
        }
    }
}

impl fmt::Display for ThresholdStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdStatus::Below => "below threshold",
            ThresholdStatus::At => "at threshold",
            ThresholdStatus::Above => "above threshold",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn params(k: u64, p: &str) -> BoundParams {
        BoundParams::new(k, q(p)).unwrap()
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(q("1/576"), BigRational::new(1.into(), 576.into()));
        assert_eq!(q("0.001"), BigRational::new(1.into(), 1000.into()));
        assert_eq!(q("1e-3"), q("0.001"));
        assert_eq!(q("2.5E2"), BigRational::from_integer(250.into()));
        assert_eq!(q("-0.5"), BigRational::new((-1).into(), 2.into()));
        assert_eq!(q(".25"), BigRational::new(1.into(), 4.into()));
        assert_eq!(q("3"), BigRational::from_integer(3.into()));
        for bad in ["", "abc", "1/0", "1.2.3", "e5", "0x10"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(BoundParams::new(0, q("0.1")).is_err());
        assert!(BoundParams::new(1, q("2")).is_err());
        assert!(BoundParams::new(1, q("-1/2")).is_err());
        assert!(BoundParams::new(1, q("1")).is_ok());
    }

    #[test]
    fn checkpoints() {
        let l = checkpoint_lengths(12, 3);
        assert_eq!(l, vec![big(1), big(51), big(2601)]);
        assert_eq!(checkpoint_lengths(1, 2)[1], big(7));
        for k in 1..30 {
            assert_eq!(checkpoint_lengths(k, 1), vec![big(1)]);
            assert!(separation_system_holds(k, &checkpoint_lengths(k, 12)));
        }
        // one less than required breaks the system
        assert!(!separation_system_holds(1, &[big(1), big(5)]));
        assert!(separation_system_holds(1, &[big(1), big(6)]));
    }

    #[test]
    fn tree_counts_small() {
        let b = tree_count_bound(5, 0).unwrap();
        assert_eq!(b.recursion.value, big(1));
        let b = tree_count_bound(1, 1).unwrap();
        assert_eq!(b.recursion.value, big(2));
        assert_eq!(b.closed_form.value, big(16));
        assert!(b.closed_form_holds());
        let b = tree_count_bound(12, 2).unwrap();
        assert_eq!(b.closed_form.value, big(24).pow(8u32));
        assert!(b.closed_form_holds());
    }

    #[test]
    fn brute_force_tree_counts() {
        assert_eq!(brute_count_candidate_trees(3, 0).unwrap().value, big(1));
        for k in 1..=4 {
            assert_eq!(brute_count_candidate_trees(k, 1).unwrap().value, big(2 * k));
        }
        for k in 1..=4 {
            for m in 0..=2 {
                let exact = brute_count_candidate_trees(k, m).unwrap().value;
                assert_eq!(exact, tree_count_recursion(k, m), "k={k} m={m}");
            }
        }
        assert!(brute_count_candidate_trees(5, 1).is_err());
        assert!(brute_count_candidate_trees(1, 3).is_err());
    }

    #[test]
    fn corrected_bound_always_holds() {
        for k in 1..=20 {
            for m in 0..=8 {
                let b = tree_count_bound(k, m).unwrap();
                assert!(b.recursion.value <= b.corrected.value, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn closed_form_first_failure() {
        // smallest m with f_m > (2k)^(2^(m+1))
        let first_bad = |k| (0..=8).find(|&m| !tree_count_bound(k, m).unwrap().closed_form_holds());
        assert_eq!(first_bad(1), Some(3));
        assert_eq!(first_bad(2), Some(4));
        for k in 3..=8 {
            assert_eq!(first_bad(k), Some(5), "k={k}");
        }
        for k in 9..=20 {
            assert_eq!(first_bad(k), Some(6), "k={k}");
        }
    }

    #[test]
    fn alpha_and_threshold() {
        for k in 1..40 {
            let p = BoundParams::new(k, p_threshold(k)).unwrap();
            assert!(alpha(&p).is_one());
            assert!(p_threshold(k + 1) < p_threshold(k));
        }
        assert_eq!(alpha(&params(12, "1/1000")), q("576/1000"));
        assert!(alpha(&params(12, "0")).is_zero());
        assert_eq!(p_threshold(12), q("1/576"));
        assert_eq!(p_threshold(1), q("1/4"));
    }

    #[test]
    fn unerased_bounds() {
        let p = params(12, "1/1000");
        assert_eq!(unerased_prob_bound(&p, 0).unwrap().alpha_pow, alpha(&p));
        assert_eq!(
            unerased_prob_bound(&p, 3).unwrap().alpha_pow,
            rat_pow(&q("576/1000"), 8)
        );
        assert!(unerased_prob_bound(&p, MAX_DOUBLING + 1).is_err());
    }

    #[test]
    fn tail_examples() {
        let zero = borel_cantelli_tail(&params(12, "0"), 1, 8).unwrap();
        assert!(zero.total().is_zero());

        let t = borel_cantelli_tail(&params(12, "1/1000"), 1, 8).unwrap();
        assert_eq!(t.n_stop, 8);
        assert!(t.partial.is_positive());
        assert!(t.remainder < &t.partial * q("1/1000000"));

        assert!(matches!(
            borel_cantelli_tail(&params(12, "1/576"), 1, 8),
            Err(Error::AlphaNotLessThanOne(_))
        ));
        assert!(borel_cantelli_tail(&params(12, "1/1000"), 0, 8).is_err());
    }

    #[test]
    fn tail_extends_exact_part_when_needed() {
        // alpha = 0.96: L alpha^(2^(N+1)) < 1 first at N = 6
        let t = borel_cantelli_tail(&params(1, "0.24"), 1, 2).unwrap();
        assert!(t.ratio < BigRational::one());
        assert!(t.n_stop > 2);
    }

    #[test]
    fn tail_is_monotone_in_m() {
        for (k, p) in [(12, "1/1000"), (2, "1/50"), (1, "0.2")] {
            let bp = params(k, p);
            let tails: Vec<BigRational> = (1..12)
                .map(|m| borel_cantelli_tail(&bp, m, 6).unwrap().total())
                .collect();
            assert!(tails.windows(2).all(|w| w[1] <= w[0]), "k={k} p={p}");
        }
    }

    #[test]
    fn scientific_formatting() {
        assert_eq!(to_scientific(&q("576/1000"), 3), "5.76e-1");
        assert_eq!(to_scientific(&q("1/576"), 4), "1.736e-3");
        assert_eq!(to_scientific(&q("51"), 2), "5.1e1");
        assert_eq!(to_scientific(&q("1000"), 1), "1e3");
        assert_eq!(to_scientific(&q("-1/3"), 3), "-3.33e-1");
        assert_eq!(to_scientific(&q("0"), 3), "0");
        assert_eq!(to_scientific(&q("999/1000"), 2), "9.9e-1");
    }
}
