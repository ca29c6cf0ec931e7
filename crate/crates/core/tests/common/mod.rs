//! Brute-force oracles shared by the integration tests.

use latenum::polycube::{Boundary, LatticeSpec, ALL_FLAGS, FLAG_MINUS_X, FLAG_MINUS_Y, FLAG_PLUS_X, FLAG_PLUS_Y};

/// Smallest number of unprocessed cells, at most `limit`, that turns `b` into a finished
/// polycube, by subset search over the remaining lattice cells.
pub fn brute_completion(b: &Boundary, spec: &LatticeSpec, min_height: u32, limit: usize) -> Option<usize> {
    let area = spec.area();
    let (z, k) = (b.p / area, b.p % area);
    let pos = |j: u32| -> (u32, u32, u32) { (j % spec.w, j / spec.w, if j < k { z } else { z.wrapping_sub(1) }) };
    let existing: Vec<((u32, u32, u32), u8)> =
        (0..area).filter(|&j| b.colors[j as usize] != 0).map(|j| (pos(j), b.colors[j as usize])).collect();
    let remaining: Vec<(u32, u32, u32)> =
        (b.p..spec.cells()).map(|i| (i % area % spec.w, i % area / spec.w, i / area)).collect();
    let colors = b.color_count() as usize;
    let top = existing.iter().map(|(c, _)| c.2 + 1).max().unwrap_or(0);
    let adjacent =
        |a: (u32, u32, u32), c: (u32, u32, u32)| a.0.abs_diff(c.0) + a.1.abs_diff(c.1) + a.2.abs_diff(c.2) == 1;
    let side_flags = |c: (u32, u32, u32)| {
        let mut f = 0;
        if c.0 == 0 {
            f |= FLAG_MINUS_X;
        }
        if c.0 + 1 == spec.w {
            f |= FLAG_PLUS_X;
        }
        if c.1 == 0 {
            f |= FLAG_MINUS_Y;
        }
        if c.1 + 1 == spec.d {
            f |= FLAG_PLUS_Y;
        }
        f
    };
    let mut chosen = Vec::new();
    fn subsets(
        n: usize,
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == size {
            return visit(cur);
        }
        for i in start..n {
            cur.push(i);
            if subsets(n, size, i + 1, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for size in 0..=limit.min(remaining.len()) {
        let found = subsets(remaining.len(), size, 0, &mut chosen, &mut |set| {
            // nodes: colors first, then chosen cells
            let n = colors + set.len();
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for (i, &a) in set.iter().enumerate() {
                for (j, &c) in set.iter().enumerate().skip(i + 1) {
                    if adjacent(remaining[a], remaining[c]) {
                        let (x, y) = (find(&mut parent, colors + i), find(&mut parent, colors + j));
                        parent[x] = y;
                    }
                }
                for &(cell, col) in &existing {
                    if adjacent(remaining[a], cell) {
                        let (x, y) = (find(&mut parent, colors + i), find(&mut parent, col as usize - 1));
                        parent[x] = y;
                    }
                }
            }
            if n == 0 {
                return false;
            }
            let root = find(&mut parent, 0);
            if (1..n).any(|v| find(&mut parent, v) != root) {
                return false;
            }
            let flags = set.iter().fold(b.flags, |f, &i| f | side_flags(remaining[i]));
            let height = set.iter().map(|&i| remaining[i].2 + 1).max().unwrap_or(0).max(top);
            // objects are anchored to the bottom layer
            let grounded = colors > 0 || set.iter().any(|&i| remaining[i].2 == 0);
            grounded && flags == ALL_FLAGS && height >= min_height
        });
        if found {
            return Some(size);
        }
    }
    None
}
