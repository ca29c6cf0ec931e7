//! Exhaustive generators used to check the engines. None of this shares code with the
//! problem expansions.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

pub const BRACKETS_LIMIT: u32 = 14;
pub const DIRAN_LIMIT: u32 = 14;
pub const POLYCUBE_LIMIT: u32 = 8;

fn check(size: u32, limit: u32) -> Result<()> {
    if size > limit {
        Err(Error::OracleLimit { size, limit })
    } else {
        Ok(())
    }
}

/// Number of balanced strings of `n` bracket pairs, by writing every one of them out.
pub fn brackets_oracle(n: u32) -> Result<u64> {
    check(n, BRACKETS_LIMIT)?;
    fn go(s: &mut Vec<u8>, open: u32, depth: u32, n: u32, count: &mut u64) {
        if s.len() as u32 == 2 * n {
            if depth == 0 {
                *count += 1;
            }
            return;
        }
        if open < n {
            s.push(b'(');
            go(s, open + 1, depth + 1, n, count);
            s.pop();
        }
        if depth > 0 {
            s.push(b')');
            go(s, open, depth - 1, n, count);
            s.pop();
        }
    }
    let mut count = 0;
    go(&mut Vec::new(), 0, 0, n, &mut count);
    Ok(count)
}

/// Rooted connected subsets of a graph, grown by Redelmeier's untried-set method.
/// `neighbours` lists candidate cells adjacent to a cell; `allowed` filters out cells that
/// would make one animal appear under two roots.
fn redelmeier<C, N, A, V>(root: C, n: u32, neighbours: N, allowed: A, visit: &mut V)
where
    C: Copy + Eq + std::hash::Hash,
    N: Fn(C) -> Vec<C>,
    A: Fn(C) -> bool,
    V: FnMut(&[C]),
{
    fn rec<C, N, A, V>(
        untried: &mut Vec<C>,
        seen: &mut HashSet<C>,
        cells: &mut Vec<C>,
        n: u32,
        neighbours: &N,
        allowed: &A,
        visit: &mut V,
    ) where
        C: Copy + Eq + std::hash::Hash,
        N: Fn(C) -> Vec<C>,
        A: Fn(C) -> bool,
        V: FnMut(&[C]),
    {
        while let Some(c) = untried.pop() {
            cells.push(c);
            visit(cells);
            if (cells.len() as u32) < n {
                let mut added = Vec::new();
                for nb in neighbours(c) {
                    if allowed(nb) && seen.insert(nb) {
                        added.push(nb);
                    }
                }
                let mut next = untried.clone();
                next.extend(added.iter().copied());
                rec(&mut next, seen, cells, n, neighbours, allowed, visit);
                for nb in added {
                    seen.remove(&nb);
                }
            }
            cells.pop();
        }
    }
    let mut seen = HashSet::new();
    seen.insert(root);
    rec(&mut vec![root], &mut seen, &mut Vec::new(), n, &neighbours, &allowed, visit);
}

/// Directed site animals of every size up to `n`: index `k` holds the count of size `k`.
pub fn diran_oracle_counts(n: u32) -> Result<Vec<u64>> {
    check(n, DIRAN_LIMIT)?;
    let mut counts = vec![0u64; n as usize + 1];
    redelmeier((0i32, 0i32), n, |(x, y)| vec![(x + 1, y), (x, y + 1)], |_| true, &mut |cells| counts[cells.len()] += 1);
    Ok(counts)
}

pub fn diran_oracle(n: u32) -> Result<u64> {
    Ok(diran_oracle_counts(n)?[n as usize])
}

/// Per-size statistics of fixed polycubes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolycubeCensus {
    /// `counts[k]`: polycubes with `k` cells.
    pub counts: Vec<u64>,
    /// `surface[k][a]`: polycubes with `k` cells and surface area `a`.
    pub surface: Vec<BTreeMap<u32, u64>>,
    /// `boxes[k][(w, d, h)]`: polycubes with `k` cells and bounding box `w × d × h`.
    pub boxes: Vec<BTreeMap<(u32, u32, u32), u64>>,
}

/// Every fixed polycube with at most `n` cells, rooted at its lexicographically first cell.
pub fn polycube_census(n: u32) -> Result<PolycubeCensus> {
    check(n, POLYCUBE_LIMIT)?;
    let len = n as usize + 1;
    let mut census =
        PolycubeCensus { counts: vec![0; len], surface: vec![BTreeMap::new(); len], boxes: vec![BTreeMap::new(); len] };
    let dirs = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)];
    redelmeier(
        (0i32, 0i32, 0i32),
        n,
        |(x, y, z)| dirs.iter().map(|(dx, dy, dz)| (x + dx, y + dy, z + dz)).collect(),
        // the root is the least cell in (z, y, x) order
        |(x, y, z)| z > 0 || (z == 0 && (y > 0 || (y == 0 && x >= 0))),
        &mut |cells| {
            let k = cells.len();
            census.counts[k] += 1;
            let set: HashSet<_> = cells.iter().copied().collect();
            let contacts = cells.iter().filter(|&&(x, y, z)| set.contains(&(x + 1, y, z))).count()
                + cells.iter().filter(|&&(x, y, z)| set.contains(&(x, y + 1, z))).count()
                + cells.iter().filter(|&&(x, y, z)| set.contains(&(x, y, z + 1))).count();
            let area = (6 * k - 2 * contacts) as u32;
            *census.surface[k].entry(area).or_insert(0) += 1;
            let span = |f: fn(&(i32, i32, i32)) -> i32| {
                let lo = cells.iter().map(f).min().unwrap();
                let hi = cells.iter().map(f).max().unwrap();
                (hi - lo + 1) as u32
            };
            let dims = (span(|c| c.0), span(|c| c.1), span(|c| c.2));
            *census.boxes[k].entry(dims).or_insert(0) += 1;
        },
    );
    Ok(census)
}

pub fn polycube_oracle(n: u32) -> Result<u64> {
    Ok(polycube_census(n)?.counts[n as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(brackets_oracle(3).unwrap(), 5);
        assert_eq!(
            (0..=10).map(|n| brackets_oracle(n).unwrap()).collect::<Vec<_>>(),
            [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
        );
        assert_eq!(diran_oracle_counts(6).unwrap(), [0, 1, 2, 5, 13, 35, 96]);
        assert_eq!(polycube_census(4).unwrap().counts, [0, 1, 3, 15, 86]);
    }

    #[test]
    fn limits() {
        assert_eq!(brackets_oracle(15), Err(Error::OracleLimit { size: 15, limit: 14 }));
        assert!(diran_oracle(15).is_err());
        assert!(polycube_oracle(9).is_err());
    }

    #[test]
    fn domino_geometry() {
        let c = polycube_census(2).unwrap();
        assert_eq!(c.surface[2], BTreeMap::from([(10, 3)]));
        assert_eq!(c.boxes[2].values().sum::<u64>(), 3);
        assert_eq!(c.boxes[2][&(1, 1, 2)], 1);
    }
}
