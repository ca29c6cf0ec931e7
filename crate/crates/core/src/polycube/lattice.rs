use super::boundary::{
    canonicalize_colors, group_of, reflect_canonicalize, Boundary, LatticeSpec, ALL_FLAGS, FLAG_MINUS_X, FLAG_MINUS_Y,
    FLAG_PLUS_X, FLAG_PLUS_Y,
};
use super::trim::{trim_lower_bound, TrimRule};
use crate::error::{Error, Result};
use crate::model::{Bound, Expansion, HierarchyValue, Problem, StateKey, Term};

/// Switches for one finite-lattice run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeOptions {
    /// Lowest completed height that is reported.
    pub min_height: u32,
    /// Bound used by trimming; `None` disables it.
    pub trim: Option<TrimRule>,
    /// Merge row-aligned boundaries with their mirror images.
    pub reflect: bool,
    /// Carry the surface area as a second shift component.
    pub track_surface: bool,
    /// Keep every occupied cell in the boundary, so occupancy-based groups stay valid.
    pub grouped: bool,
}

/// Fixed polycubes on a `w × d × h` lattice that touch all four side walls and the floor.
#[derive(Clone, Debug)]
pub struct PolycubeLattice {
    spec: LatticeSpec,
    options: LatticeOptions,
}

impl PolycubeLattice {
    pub fn new(spec: LatticeSpec, options: LatticeOptions) -> Result<Self> {
        if options.reflect && options.grouped {
            return Err(Error::Config("reflection and grouping cannot be combined".into()));
        }
        Ok(PolycubeLattice { spec, options })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn options(&self) -> &LatticeOptions {
        &self.options
    }

    pub fn decode(&self, key: &StateKey) -> Result<Boundary> {
        Boundary::decode(&self.spec, key)
    }

    /// Height of the objects finished by terminal terms of states at `level`.
    pub fn terminal_height(&self, level: &HierarchyValue) -> u32 {
        let p = self.spec.cells() - level.0[0];
        if p == self.spec.cells() {
            self.spec.h
        } else {
            p / self.spec.area()
        }
    }

    /// Group of a state: occupancy of all cells except the one processed next.
    pub fn group(&self, key: &StateKey) -> u64 {
        group_of(&self.spec, &Boundary::decode(&self.spec, key).expect("boundary key"))
    }

    /// The prior-plane cell can be dropped when it shares a color with the prior row or
    /// column cell: every later neighbour joins that color anyway.
    fn drop_prior_plane(&self, b: &mut Boundary) {
        let area = self.spec.area();
        if b.p == self.spec.cells() || b.p < area {
            return;
        }
        let k = b.p % area;
        let (x, y) = (k % self.spec.w, k / self.spec.w);
        let pp = b.colors[k as usize];
        if pp == 0 {
            return;
        }
        let joined = (y > 0 && b.colors[(k - self.spec.w) as usize] == pp) || (x > 0 && b.colors[k as usize - 1] == pp);
        if joined {
            b.colors[k as usize] = 0;
            b.canonicalize();
        }
    }

    fn finish_child(&self, mut b: Boundary) -> Result<StateKey> {
        b.canonicalize();
        if !self.options.grouped && !self.options.track_surface {
            self.drop_prior_plane(&mut b);
        }
        if self.options.reflect && (b.p % self.spec.area()).is_multiple_of(self.spec.w) {
            b = reflect_canonicalize(&self.spec, &b)?;
        }
        Ok(b.key())
    }

    fn occupied_shift(&self, neighbours: u32) -> Vec<u32> {
        if self.options.track_surface {
            vec![1, 6 - 2 * neighbours]
        } else {
            vec![1]
        }
    }
}

impl Problem for PolycubeLattice {
    fn name(&self) -> &str {
        "polycube"
    }

    fn root(&self) -> StateKey {
        Boundary::empty(&self.spec).key()
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let b = self.decode(state)?;
        let spec = &self.spec;
        let (area, total) = (spec.area(), spec.cells());
        let mut e = Expansion::new();
        if b.p == total {
            if b.color_count() == 1 && b.flags == ALL_FLAGS && spec.h >= self.options.min_height {
                e.push(Term::terminal(1));
            }
            return Ok(e);
        }
        let (z, k) = (b.p / area, b.p % area);
        let (x, y) = (k % spec.w, k / spec.w);
        let ku = k as usize;
        let prior_plane = if z > 0 { b.colors[ku] } else { 0 };
        let prior_row = if y > 0 { b.colors[ku - spec.w as usize] } else { 0 };
        let prior_col = if x > 0 { b.colors[ku - 1] } else { 0 };

        // next cell left empty
        let mut empty = b.colors.clone();
        empty[ku] = 0;
        let vanished = prior_plane != 0 && !empty.contains(&prior_plane);
        let none_left = empty.iter().all(|&c| c == 0);
        if vanished {
            if none_left {
                // the object is complete; its top layer is z - 1
                if b.flags == ALL_FLAGS && z >= self.options.min_height {
                    debug_assert!(z <= spec.h);
                    e.push(Term::terminal(1));
                }
            }
            // otherwise a component was cut off from the rest
        } else if !(none_left && b.p + 1 >= area) {
            e.push(Term::sum(self.finish_child(Boundary { p: b.p + 1, flags: b.flags, colors: empty })?));
        }

        // next cell occupied
        let mut full = b.colors;
        let joined: Vec<u8> = [prior_plane, prior_row, prior_col].into_iter().filter(|&c| c != 0).collect();
        let neighbours = joined.len() as u32;
        let color = joined.iter().copied().min().unwrap_or_else(|| full.iter().copied().max().unwrap_or(0) + 1);
        for c in full.iter_mut() {
            if *c != 0 && joined.contains(c) {
                *c = color;
            }
        }
        full[ku] = color;
        canonicalize_colors(&mut full);
        let mut flags = b.flags;
        if x == 0 {
            flags |= FLAG_MINUS_X;
        }
        if x + 1 == spec.w {
            flags |= FLAG_PLUS_X;
        }
        if y == 0 {
            flags |= FLAG_MINUS_Y;
        }
        if y + 1 == spec.d {
            flags |= FLAG_PLUS_Y;
        }
        let child = self.finish_child(Boundary { p: b.p + 1, flags, colors: full })?;
        e.push(Term::weighted(child, 1, self.occupied_shift(neighbours)));
        Ok(e)
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        let p = u32::from_le_bytes(state.as_bytes()[0..4].try_into().expect("boundary key"));
        HierarchyValue::single(self.spec.cells() - p)
    }

    fn describe(&self, state: &StateKey) -> String {
        match self.decode(state) {
            Ok(b) => b.render(&self.spec),
            Err(_) => format!("{state:?}"),
        }
    }

    fn variable_count(&self) -> usize {
        if self.options.track_surface {
            2
        } else {
            1
        }
    }

    fn completion_bound(&self, state: &StateKey) -> Option<Bound> {
        let rule = self.options.trim?;
        let b = self.decode(state).ok()?;
        Some(trim_lower_bound(&b, &self.spec, self.options.min_height, rule))
    }

    fn strip_level(&self, state: &StateKey) -> StateKey {
        StateKey::new(state.as_bytes()[4..].to_vec())
    }

    fn restore_level(&self, level: &HierarchyValue, stored: &StateKey) -> StateKey {
        let mut b = (self.spec.cells() - level.0[0]).to_le_bytes().to_vec();
        b.extend_from_slice(stored.as_bytes());
        StateKey::new(b)
    }
}
