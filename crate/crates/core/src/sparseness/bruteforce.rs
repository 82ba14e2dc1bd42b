use super::{territory, well_separated, Island, OutsideMode, SiteSet, SparsenessParams};
use crate::error::{Error, Result};

/// Largest window [`find_cover_bruteforce`] accepts.
pub const MAX_BRUTEFORCE_WINDOW: usize = 24;

/// Exhaustive search for a family of disjoint, pairwise well-separated
/// islands of length at most `l_cap`, all inside the window, covering
/// every member of `e`. Returns the first family found.
///
/// Islands are chosen left to right: each new island must start after the
/// previous one and hold the leftmost member not yet covered. Under
/// [`OutsideMode::Unknown`] islands must also keep their territory inside
/// the window.
pub fn find_cover_bruteforce(
    e: &SiteSet,
    params: &SparsenessParams,
    l_cap: u64,
) -> Result<Option<Vec<Island>>> {
    let size = e.window_len();
    if size > MAX_BRUTEFORCE_WINDOW {
        return Err(Error::WindowTooLarge {
            size,
            max: MAX_BRUTEFORCE_WINDOW,
        });
    }
    let mut chosen = Vec::new();
    let found = search(e, params, l_cap, 0, *e.window().start() - 1, &mut chosen)?;
    Ok(found.then_some(chosen))
}

fn search(
    e: &SiteSet,
    params: &SparsenessParams,
    l_cap: u64,
    next_member: usize,
    prev_end: i64,
    chosen: &mut Vec<Island>,
) -> Result<bool> {
    let members = e.members();
    let Some(&m) = members.get(next_member) else {
        return Ok(true);
    };
    let (w_lo, w_hi) = (*e.window().start(), *e.window().end());
    for a in (prev_end + 1).max(w_lo)..=m {
        let b_max = w_hi.min(a + l_cap as i64 - 1);
        for b in m..=b_max {
            let island = Island::spanning(a, b)?;
            if e.outside() == OutsideMode::Unknown {
                let t = territory(&island, params);
                if *t.start() < w_lo || *t.end() > w_hi {
                    continue;
                }
            }
            let mut ok = true;
            for other in chosen.iter() {
                if !well_separated(other, &island, params)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let after = members.partition_point(|&x| x <= b);
            chosen.push(island);
            if search(e, params, l_cap, after, b, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(k: u64) -> SparsenessParams {
        SparsenessParams::new(k).unwrap()
    }

    #[test]
    fn single_member() {
        let e = SiteSet::new(-5..=5, [0], OutsideMode::Empty).unwrap();
        let cover = find_cover_bruteforce(&e, &k(2), 11).unwrap().unwrap();
        assert_eq!(cover.len(), 1);
        assert!(cover[0].contains(0));
    }

    #[test]
    fn adjacent_pair_needs_one_island() {
        let e = SiteSet::new(-5..=5, [0, 1], OutsideMode::Empty).unwrap();
        assert_eq!(find_cover_bruteforce(&e, &k(2), 1).unwrap(), None);
        let cover = find_cover_bruteforce(&e, &k(2), 2).unwrap().unwrap();
        assert_eq!(cover, vec![Island::spanning(0, 1).unwrap()]);
    }

    #[test]
    fn full_window_is_one_island() {
        let e = SiteSet::new(0..=11, 0..12, OutsideMode::Empty).unwrap();
        let cover = find_cover_bruteforce(&e, &k(2), 12).unwrap().unwrap();
        assert_eq!(cover, vec![Island::spanning(0, 11).unwrap()]);
    }

    #[test]
    fn empty_set_has_empty_cover() {
        let e = SiteSet::new(0..=5, [], OutsideMode::Empty).unwrap();
        assert_eq!(find_cover_bruteforce(&e, &k(3), 1).unwrap(), Some(vec![]));
    }

    #[test]
    fn window_limit() {
        let e = SiteSet::new(0..=24, [3], OutsideMode::Empty).unwrap();
        assert!(matches!(
            find_cover_bruteforce(&e, &k(2), 3),
            Err(Error::WindowTooLarge { size: 25, max: 24 })
        ));
    }

    #[test]
    fn returned_covers_are_valid() {
        let p = k(2);
        for mask in 0u32..1 << 10 {
            let e = SiteSet::new(0..=9, (0..10).filter(|i| mask >> i & 1 == 1), OutsideMode::Empty)
                .unwrap();
            if let Some(cover) = find_cover_bruteforce(&e, &p, 10).unwrap() {
                for &m in e.members() {
                    assert!(cover.iter().any(|i| i.contains(m)));
                }
                for (i, a) in cover.iter().enumerate() {
                    for b in &cover[i + 1..] {
                        assert!(well_separated(a, b, &p).unwrap());
                    }
                }
            }
        }
    }
}
