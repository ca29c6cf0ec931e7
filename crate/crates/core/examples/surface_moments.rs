//! Surface area as a second variable, and its moments without the second dimension.

use latenum::polycube::{assemble_counts, AssemblyEngine, PolycubeOptions};
use latenum::value::{moment_mean, CheckedI64, Gf2Ring, MomentRing};

fn main() -> Result<(), latenum::error::Error> {
    let n = 6;
    let options = PolycubeOptions { track_surface: true, ..Default::default() };
    let full = assemble_counts(n, &options, &Gf2Ring::new(CheckedI64, n), AssemblyEngine::Tm)?;
    for area in 0..=6 * n {
        let c = full.total.coeff(&CheckedI64, 4, area);
        if c != 0 {
            println!("volume 4, surface {area}: {c}");
        }
    }
    let moments = assemble_counts(n, &options, &MomentRing::new(CheckedI64, 2, n), AssemblyEngine::Tm)?;
    for k in 1..=n {
        println!("volume {k}: mean surface {}", moment_mean(&CheckedI64, &moments.total, k)?);
    }
    Ok(())
}
