//! Effect of the completion bound on one lattice: same series, fewer states.

use latenum::polycube::{enumerate_lattice, LatticeSpec, PolycubeOptions, TrimRule};
use latenum::value::{CheckedI64, SeriesRing};

fn main() -> Result<(), latenum::error::Error> {
    let spec = LatticeSpec::new(3, 4, 4)?;
    let ring = SeriesRing::new(CheckedI64, 12);
    for trim in [None, Some(TrimRule::Max)] {
        let run = enumerate_lattice(spec, 1, &PolycubeOptions { trim, ..Default::default() }, &ring)?;
        let stored: u64 = run.stats.gf_length_histogram.values().sum();
        println!(
            "trim {:<10} expansions {:>8}  trimmed {:>7}  peak {:>6}  stored series {stored}",
            format!("{trim:?}"),
            run.stats.expansions,
            run.stats.trimmed_states,
            run.stats.peak_live_states
        );
        for (len, count) in &run.stats.gf_length_histogram {
            println!("    length {len:>2}: {count}");
        }
    }
    Ok(())
}
