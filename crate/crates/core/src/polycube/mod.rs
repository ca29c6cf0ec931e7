//! Fixed polycubes by the finite-lattice transfer-matrix method.
//!
//! Each lattice `w × d × h` with `w <= d <= h` counts the polycubes whose bounding box is
//! exactly that box; the totals follow by multiplying with the number of distinct axis
//! permutations of the box.

mod assemble;
mod boundary;
mod lattice;
mod trim;

pub use assemble::{
    assemble_counts, box_permutations, enumerate_lattice, lattice_schedule, Assembly, AssemblyEngine, LatticeRecord,
    LatticeRun, PolycubeOptions,
};
pub use boundary::{
    canonicalize_colors, child_group, group_of, reflect_canonicalize, Boundary, LatticeSpec, ALL_FLAGS, FLAG_MINUS_X,
    FLAG_MINUS_Y, FLAG_PLUS_X, FLAG_PLUS_Y,
};
pub use lattice::{LatticeOptions, PolycubeLattice};
pub use trim::{
    color_table, connection_cost, consistency, trim_costs, trim_lower_bound, TrimCosts, TrimGrid, TrimRule, INF,
};
