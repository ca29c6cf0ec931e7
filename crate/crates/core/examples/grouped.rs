//! Parallel grouped evaluation gives the same series and frontier digest for any thread
//! count or schedule order.

use latenum::polycube::{enumerate_lattice, LatticeSpec, PolycubeOptions};
use latenum::value::{CheckedI64, SeriesRing};

fn main() -> Result<(), latenum::error::Error> {
    let spec = LatticeSpec::new(3, 3, 4)?;
    let ring = SeriesRing::new(CheckedI64, 10);
    for (threads, seed) in [(1, None), (4, Some(1)), (8, Some(2))] {
        let options = PolycubeOptions { grouped: true, threads, shuffle_seed: seed, ..Default::default() };
        let run = enumerate_lattice(spec, 1, &options, &ring)?;
        let top = run.per_height.last().map(|(_, g)| g.render(&CheckedI64)).unwrap_or_default();
        println!(
            "threads {threads} digest {:016x} groups {}: {top}",
            run.stats.frontier_digest, run.stats.groups_processed
        );
    }
    Ok(())
}
