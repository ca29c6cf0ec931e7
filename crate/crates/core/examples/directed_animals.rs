//! Directed animals on the square lattice under both state formulations, with the
//! frontier engine's per-level multiplicities for a small size.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::{reachable_state_count, Problem};
use latenum::problems::{DirectedAnimals, Formulation};
use latenum::tm::{tm_evaluate_observed, FrontierRecorder, TmOptions};
use latenum::value::CheckedI64;

fn main() -> Result<(), latenum::error::Error> {
    let p = DirectedAnimals::new(4, Formulation::B)?;
    let mut rec = FrontierRecorder::default();
    let run = tm_evaluate_observed(&p, &p.root(), &CheckedI64, &TmOptions::default(), &mut rec)?;
    for (level, entries) in &rec.frontiers {
        let row: Vec<String> = entries.iter().map(|(k, v)| format!("{} x{v}", p.describe(k))).collect();
        println!("level {level}: {}", row.join(", "));
    }
    println!("total {}", run.value);

    for f in [Formulation::A, Formulation::B] {
        let p = DirectedAnimals::new(16, f)?;
        let v = dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::full())?.value;
        let states = reachable_state_count(&p, &p.root(), 1 << 24)?;
        println!("{}: n=16 count {v}, {states} reachable states", p.name());
    }
    Ok(())
}
