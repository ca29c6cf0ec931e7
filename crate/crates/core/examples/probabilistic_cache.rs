//! Storing only a fraction of computed values trades memory for recomputation.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::Problem;
use latenum::problems::{DirectedAnimals, Formulation};
use latenum::value::CheckedI64;

fn main() -> Result<(), latenum::error::Error> {
    let p = DirectedAnimals::new(25, Formulation::B)?;
    for prob in [1.0, 0.5, 0.3, 0.1] {
        let run = dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::with_probability(prob)?)?;
        println!("p={prob:<4} value={} entries={:>6} calls={:>8}", run.value, run.stats.entries, run.stats.calls);
    }
    Ok(())
}
