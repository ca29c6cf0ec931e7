//! Conservative lower bounds on the number of cells still needed to finish a polycube.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::boundary::{Boundary, LatticeSpec, ALL_FLAGS, FLAG_MINUS_X, FLAG_MINUS_Y, FLAG_PLUS_X, FLAG_PLUS_Y};
use crate::model::Bound;

/// Distance value standing for "unreachable".
pub const INF: u32 = u32::MAX / 4;

/// How the connection, edge and height costs are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrimRule {
    /// `max(K + Zg, E + Z)`: each part counts cells no other part can count.
    #[default]
    Max,
    /// `K + E + Z` less at most one unit of discount.
    Additive,
}

/// Unprocessed cells that a minimal connection can be projected onto: the free cells of
/// the current layer and the whole layer above it.
#[derive(Clone, Debug)]
pub struct TrimGrid {
    /// `(x, y, z)` of each grid cell.
    pub cells: Vec<(u32, u32, u32)>,
    pub adjacency: Vec<Vec<usize>>,
    /// Grid cells adjacent to each boundary entry.
    pub touching: Vec<Vec<usize>>,
}

impl TrimGrid {
    pub fn new(spec: &LatticeSpec, p: u32) -> TrimGrid {
        let (w, d, area) = (spec.w, spec.d, spec.area());
        let (z, k) = (p / area, p % area);
        let mut index = vec![[usize::MAX; 2]; area as usize];
        let mut cells = Vec::new();
        for j in k..area {
            index[j as usize][0] = cells.len();
            cells.push((j % w, j / w, z));
        }
        if z + 1 < spec.h {
            for j in 0..area {
                index[j as usize][1] = cells.len();
                cells.push((j % w, j / w, z + 1));
            }
        }
        let at = |x: u32, y: u32, layer: usize| index[(y * w + x) as usize][layer];
        let mut adjacency = vec![Vec::new(); cells.len()];
        for (gi, &(x, y, cz)) in cells.iter().enumerate() {
            let layer = (cz - z) as usize;
            let mut push = |o: usize| {
                if o != usize::MAX {
                    adjacency[gi].push(o);
                }
            };
            if x > 0 {
                push(at(x - 1, y, layer));
            }
            if x + 1 < w {
                push(at(x + 1, y, layer));
            }
            if y > 0 {
                push(at(x, y - 1, layer));
            }
            if y + 1 < d {
                push(at(x, y + 1, layer));
            }
            push(at(x, y, 1 - layer));
        }
        let mut touching = vec![Vec::new(); area as usize];
        for j in 0..area {
            let (x, y) = (j % w, j / w);
            let t = &mut touching[j as usize];
            if j < k {
                // current-layer cell: above, and forward neighbours not yet processed
                if index[j as usize][1] != usize::MAX {
                    t.push(index[j as usize][1]);
                }
                if x + 1 < w && j + 1 >= k {
                    t.push(index[j as usize + 1][0]);
                }
                if y + 1 < d && j + w >= k {
                    t.push(index[(j + w) as usize][0]);
                }
            } else {
                t.push(index[j as usize][0]);
            }
        }
        TrimGrid { cells, adjacency, touching }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Largest table below `t` with every entry at most one more than each neighbour's.
pub fn consistency(t: &[u32], adjacency: &[Vec<usize>]) -> Vec<u32> {
    relax(t, adjacency, &vec![1; t.len()])
}

/// Node-weighted form: entering vertex `n` costs `weight[n]`.
fn relax(t: &[u32], adjacency: &[Vec<usize>], weight: &[u32]) -> Vec<u32> {
    let mut out = t.to_vec();
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> =
        out.iter().enumerate().filter(|(_, &v)| v < INF).map(|(i, &v)| Reverse((v, i))).collect();
    while let Some(Reverse((v, i))) = heap.pop() {
        if v > out[i] {
            continue;
        }
        for &n in &adjacency[i] {
            if v + weight[n] < out[n] {
                out[n] = v + weight[n];
                heap.push(Reverse((v + weight[n], n)));
            }
        }
    }
    out
}

/// The grid plus one free vertex per color, joined to the cells its entries touch. A
/// connecting forest may branch at an existing component, so the Steiner recursion has to
/// be able to split there too.
struct ColorGraph {
    adjacency: Vec<Vec<usize>>,
    weight: Vec<u32>,
    base: usize,
}

impl ColorGraph {
    fn new(b: &Boundary, g: &TrimGrid) -> ColorGraph {
        let base = g.len();
        let k = b.color_count() as usize;
        let mut adjacency = g.adjacency.clone();
        adjacency.resize(base + k, Vec::new());
        for (j, &col) in b.colors.iter().enumerate() {
            if col == 0 {
                continue;
            }
            let node = base + col as usize - 1;
            for &gi in &g.touching[j] {
                if !adjacency[node].contains(&gi) {
                    adjacency[node].push(gi);
                    adjacency[gi].push(node);
                }
            }
        }
        let mut weight = vec![1; base + k];
        weight[base..].fill(0);
        ColorGraph { adjacency, weight, base }
    }

    fn node(&self, c: u8) -> usize {
        self.base + c as usize - 1
    }

    fn table(&self, c: u8) -> Vec<u32> {
        let mut t = vec![INF; self.weight.len()];
        t[self.node(c)] = 0;
        relax(&t, &self.adjacency, &self.weight)
    }

    fn combine(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter()
            .zip(b)
            .zip(&self.weight)
            .map(|((&x, &y), &w)| if x >= INF || y >= INF { INF } else { x + y - w })
            .collect()
    }

    /// Steiner tables for every subset of the given terminal colors, indexed by bit mask:
    /// entry `v` of table `m` is the cheapest tree joining the colors in `m` and vertex `v`.
    fn steiner(&self, colors: &[u8]) -> Vec<Vec<u32>> {
        let n = self.weight.len();
        let full = (1usize << colors.len()) - 1;
        let mut s = vec![Vec::new(); full + 1];
        for (i, &c) in colors.iter().enumerate() {
            s[1 << i] = self.table(c);
        }
        for m in 1..=full {
            if m.count_ones() < 2 {
                continue;
            }
            let mut best = vec![INF; n];
            // proper splits, each unordered pair once
            let mut sub = (m - 1) & m;
            while sub > 0 {
                if sub < m ^ sub {
                    for (v, x) in self.combine(&s[sub], &s[m ^ sub]).into_iter().enumerate() {
                        best[v] = best[v].min(x);
                    }
                }
                sub = (sub - 1) & m;
            }
            s[m] = relax(&best, &self.adjacency, &self.weight);
        }
        s
    }
}

/// Cells needed to reach each vertex from color `c`: the grid cells first, then one entry
/// per color. Passing through another color costs nothing.
pub fn color_table(b: &Boundary, g: &TrimGrid, c: u8) -> Vec<u32> {
    ColorGraph::new(b, g).table(c)
}

/// Lower bound on the cells needed to join every color; exact for up to four colors.
/// Returns [`INF`] when some colors cannot be joined inside the grid.
pub fn connection_cost(b: &Boundary, g: &TrimGrid) -> u32 {
    let k = b.color_count();
    if k <= 1 {
        return 0;
    }
    let cg = ColorGraph::new(b, g);
    let exact: Vec<u8> = (1..=k.min(4)).collect();
    let tables = cg.steiner(&exact);
    if k <= 4 {
        return tables[tables.len() - 1][cg.node(k)];
    }
    // five or more: join the first three, then the cheapest reach of each other color
    let tri = &tables[0b111];
    (4..=k).map(|c| tri[cg.node(c)]).max().unwrap_or(INF)
}

/// Components of the lower bound, kept apart for reporting and testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrimCosts {
    pub connection: u32,
    pub edges: u32,
    /// Layers still to climb above the top occupied boundary cell.
    pub height: u32,
    /// Layers to climb beyond the grid.
    pub height_beyond_grid: u32,
    pub kink_discount: bool,
}

/// Cost components of a non-final state with at least one occupied cell.
pub fn trim_costs(b: &Boundary, spec: &LatticeSpec, min_height: u32, g: &TrimGrid) -> TrimCosts {
    let area = spec.area();
    let (z, k) = (b.p / area, b.p % area);
    let connection = connection_cost(b, g);
    let occupied: Vec<(u32, u32)> = b
        .colors
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(j, _)| (j as u32 % spec.w, j as u32 / spec.w))
        .collect();
    let minx = occupied.iter().map(|c| c.0).min().unwrap_or(0);
    let maxx = occupied.iter().map(|c| c.0).max().unwrap_or(0);
    let miny = occupied.iter().map(|c| c.1).min().unwrap_or(0);
    let maxy = occupied.iter().map(|c| c.1).max().unwrap_or(0);
    let untouched = |f: u8| b.flags & f == 0;
    let mut edges = 0;
    if untouched(FLAG_MINUS_X) {
        edges += minx;
    }
    if untouched(FLAG_PLUS_X) {
        edges += spec.w - 1 - maxx;
    }
    if untouched(FLAG_MINUS_Y) {
        edges += miny;
    }
    if untouched(FLAG_PLUS_Y) {
        edges += spec.d - 1 - maxy;
    }
    let top = if b.colors[..k as usize].iter().any(|&c| c != 0) { z as i64 } else { z as i64 - 1 };
    let height = (min_height as i64 - 1 - top).max(0) as u32;
    let height_beyond_grid = (min_height as i64 - 2 - z as i64).max(0) as u32;
    let kink_discount = untouched(FLAG_PLUS_Y) && k / spec.w + 2 >= spec.d;
    TrimCosts { connection, edges, height, height_beyond_grid, kink_discount }
}

/// Whether every side not yet touched still has an unprocessed cell on it.
fn sides_reachable(b: &Boundary, spec: &LatticeSpec) -> bool {
    let area = spec.area();
    // above the current layer every cross-section cell is still free
    if b.p / area + 1 < spec.h {
        return true;
    }
    let free = (b.p % area..area).map(|j| (j % spec.w, j / spec.w));
    let mut reachable = b.flags;
    for (x, y) in free {
        reachable |= if x == 0 { FLAG_MINUS_X } else { 0 }
            | if x + 1 == spec.w { FLAG_PLUS_X } else { 0 }
            | if y == 0 { FLAG_MINUS_Y } else { 0 }
            | if y + 1 == spec.d { FLAG_PLUS_Y } else { 0 };
    }
    reachable == ALL_FLAGS
}

/// Minimum additional cells any valid completion of `b` must add, or `Infeasible`.
pub fn trim_lower_bound(b: &Boundary, spec: &LatticeSpec, min_height: u32, rule: TrimRule) -> Bound {
    let area = spec.area();
    if b.p == spec.cells() {
        let finished = b.color_count() == 1 && b.flags == ALL_FLAGS && spec.h >= min_height;
        return if finished { Bound::Finite(0) } else { Bound::Infeasible };
    }
    if b.is_empty() {
        // nothing placed yet: a spanning object needs at least w + d + h - 2 cells
        return if b.p < area { Bound::Finite(spec.w + spec.d + min_height.max(1) - 2) } else { Bound::Infeasible };
    }
    if !sides_reachable(b, spec) {
        return Bound::Infeasible;
    }
    let g = TrimGrid::new(spec, b.p);
    let c = trim_costs(b, spec, min_height, &g);
    if c.connection >= INF {
        return Bound::Infeasible;
    }
    let bound = match rule {
        TrimRule::Max => (c.connection + c.height_beyond_grid).max(c.edges + c.height),
        TrimRule::Additive => {
            let total = c.connection + c.edges + c.height;
            let discount = (c.connection > 0 && c.height > 0) || c.kink_discount;
            total - discount as u32
        }
    };
    Bound::Finite(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| [i.wrapping_sub(1), i + 1].into_iter().filter(|&j| j < n).collect()).collect()
    }

    #[test]
    fn consistency_on_a_path() {
        assert_eq!(consistency(&[0, INF, INF], &path(3)), [0, 1, 2]);
        assert_eq!(consistency(&[0, 1, 2], &path(3)), [0, 1, 2]);
        assert_eq!(consistency(&[5, INF, 0, 9], &path(4)), [2, 1, 0, 1]);
    }

    fn relax_oracle(t: &[u32], adj: &[Vec<usize>]) -> Vec<u32> {
        // all-pairs BFS distances, then min over sources
        let n = t.len();
        let mut out = t.to_vec();
        for s in 0..n {
            if t[s] >= INF {
                continue;
            }
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            for i in 0..n {
                if dist[i] != usize::MAX {
                    out[i] = out[i].min(t[s] + dist[i] as u32);
                }
            }
        }
        out
    }

    proptest::proptest! {
        #[test]
        fn consistency_matches_shortest_paths(vals in proptest::collection::vec(proptest::option::of(0u32..10), 12), p in 0u32..12) {
            let spec = LatticeSpec::new(2, 3, 3).unwrap();
            let g = TrimGrid::new(&spec, p);
            let t: Vec<u32> = vals.iter().take(g.len()).map(|v| v.unwrap_or(INF)).chain(std::iter::repeat(INF)).take(g.len()).collect();
            let c = consistency(&t, &g.adjacency);
            proptest::prop_assert_eq!(&c, &relax_oracle(&t, &g.adjacency));
            proptest::prop_assert_eq!(consistency(&c, &g.adjacency), c);
        }
    }

    #[test]
    fn grid_adjacency_is_symmetric() {
        let spec = LatticeSpec::new(3, 2, 4).unwrap();
        for p in 0..spec.cells() {
            let g = TrimGrid::new(&spec, p);
            for (i, ns) in g.adjacency.iter().enumerate() {
                for &n in ns {
                    assert!(g.adjacency[n].contains(&i));
                    let (a, b) = (g.cells[i], g.cells[n]);
                    let d = a.0.abs_diff(b.0) + a.1.abs_diff(b.1) + a.2.abs_diff(b.2);
                    assert_eq!(d, 1);
                }
            }
        }
    }

    #[test]
    fn tables_from_single_and_double_cells() {
        // 1 x 4 cross-section at the start of layer 1: the boundary is layer 0
        let spec = LatticeSpec::new(4, 1, 3).unwrap();
        let b = Boundary { p: 4, flags: 0, colors: vec![1, 0, 0, 2] };
        let g = TrimGrid::new(&spec, 4);
        let t1 = color_table(&b, &g, 1);
        // layer 1 cells straight above, then layer 2
        assert_eq!(&t1[..4], &[1, 2, 3, 4]);
        assert_eq!(&t1[4..8], &[2, 3, 4, 5]);
        // joined through layer 1: cells above x = 0..3
        assert_eq!(connection_cost(&b, &g), 4);
        let both = Boundary { p: 4, flags: 0, colors: vec![1, 0, 0, 1] };
        let t = color_table(&both, &g, 1);
        assert_eq!(&t[..4], &[1, 2, 2, 1]);
        assert_eq!(connection_cost(&both, &g), 0);
    }

    #[test]
    fn two_colors_on_a_path_grid() {
        // colors three steps apart along a path: two cells in between
        let g = TrimGrid { cells: vec![(0, 0, 0), (1, 0, 0)], adjacency: path(2), touching: vec![vec![0], vec![1]] };
        let b = Boundary { p: 0, flags: 0, colors: vec![1, 2] };
        assert_eq!(connection_cost(&b, &g), 2);
        let three = Boundary { p: 0, flags: 0, colors: vec![1, 2, 3] };
        let g3 = TrimGrid { cells: vec![(0, 0, 0); 3], adjacency: path(3), touching: vec![vec![0], vec![2], vec![1]] };
        assert_eq!(connection_cost(&three, &g3), 3);
    }

    /// Smallest set of grid cells joining every color, by subset search.
    fn steiner_oracle(b: &Boundary, g: &TrimGrid) -> u32 {
        let cg = ColorGraph::new(b, g);
        let k = b.color_count() as usize;
        let n = g.len();
        let mut best = INF;
        for set in 0u32..(1 << n) {
            if set.count_ones() >= best {
                continue;
            }
            let on = |v: usize| v >= n || set >> v & 1 == 1;
            let mut seen = vec![false; n + k];
            let mut stack = vec![cg.node(1)];
            seen[cg.node(1)] = true;
            while let Some(u) = stack.pop() {
                for &v in &cg.adjacency[u] {
                    if on(v) && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            if (1..=k as u8).all(|c| seen[cg.node(c)]) {
                best = set.count_ones();
            }
        }
        best
    }

    proptest::proptest! {
        #[test]
        fn connection_cost_is_exact_up_to_four_colors(
            raw in proptest::collection::vec(0u8..5, 6),
            p in 6u32..17,
        ) {
            let spec = LatticeSpec::new(2, 3, 3).unwrap();
            let mut b = Boundary { p, flags: 0, colors: raw };
            b.canonicalize();
            let g = TrimGrid::new(&spec, p);
            if !b.is_empty() {
                proptest::prop_assert_eq!(connection_cost(&b, &g).min(INF), steiner_oracle(&b, &g));
            }
        }
    }

    #[test]
    fn finished_and_edge_bounds() {
        let spec = LatticeSpec::new(2, 2, 2).unwrap();
        let done = Boundary { p: 8, flags: ALL_FLAGS, colors: vec![1, 0, 0, 0] };
        assert_eq!(trim_lower_bound(&done, &spec, 2, TrimRule::Max), Bound::Finite(0));
        let open = Boundary { p: 8, flags: ALL_FLAGS, colors: vec![1, 0, 0, 2] };
        assert_eq!(trim_lower_bound(&open, &spec, 2, TrimRule::Max), Bound::Infeasible);
        // one cell at x = 0 of a 3-wide row, +x untouched: at least two more cells
        let spec = LatticeSpec::new(3, 1, 3).unwrap();
        let b = Boundary { p: 3, flags: FLAG_MINUS_X | FLAG_MINUS_Y | FLAG_PLUS_Y, colors: vec![1, 0, 0] };
        match trim_lower_bound(&b, &spec, 1, TrimRule::Max) {
            Bound::Finite(v) => assert!(v >= 2),
            Bound::Infeasible => panic!("completion exists"),
        }
        // top layer, only the y = 1 row left, -y untouched
        let spec = LatticeSpec::new(2, 2, 2).unwrap();
        let b = Boundary { p: 6, flags: FLAG_MINUS_X | FLAG_PLUS_Y, colors: vec![0, 0, 1, 0] };
        assert_eq!(trim_lower_bound(&b, &spec, 1, TrimRule::Max), Bound::Infeasible);
        let lower = Boundary { p: 2, ..b };
        assert_ne!(trim_lower_bound(&lower, &spec, 1, TrimRule::Max), Bound::Infeasible);
    }
}
