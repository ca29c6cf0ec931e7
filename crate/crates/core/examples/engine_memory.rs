//! Same values from both engines; the frontier engine keeps far fewer states alive.

use latenum::model::Problem;
use latenum::problems::{DirectedAnimals, Formulation};
use latenum::tm::peak_memory_comparison;
use latenum::value::CheckedI64;

fn main() -> Result<(), latenum::error::Error> {
    for n in [10, 15, 20, 25] {
        let p = DirectedAnimals::new(n, Formulation::B)?;
        let m = peak_memory_comparison(&p, &p.root(), &CheckedI64)?;
        println!(
            "n={n}: dp cache {:>6}  tm peak live {:>6}  tm peak frontier {:>6}",
            m.dp_cache_entries, m.tm_peak_states, m.tm_peak_frontier_states
        );
    }
    Ok(())
}
