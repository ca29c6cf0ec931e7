//! Fixed polycubes by volume, assembled from one frontier run per bounding lattice.

use latenum::polycube::{assemble_counts, AssemblyEngine, PolycubeOptions};
use latenum::value::{CheckedI64, SeriesRing};

fn main() -> Result<(), latenum::error::Error> {
    let n = 9;
    let a = assemble_counts(n, &PolycubeOptions::default(), &SeriesRing::new(CheckedI64, n), AssemblyEngine::Tm)?;
    for k in 1..=n {
        println!("{k:>2} {}", a.total.coeff(&CheckedI64, k));
    }
    for r in &a.lattices {
        println!("lattice {:?}: {} expansions, peak {}", r.lattice, r.expansions, r.peak_live_states);
    }
    Ok(())
}
