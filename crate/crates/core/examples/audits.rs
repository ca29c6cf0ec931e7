//! Hierarchy and cleanliness audits of the bundled problems.

use latenum::model::{audit_hierarchy, cleanliness_audit, Problem};
use latenum::problems::{Brackets, DirectedAnimals, Formulation};
use latenum::value::CheckedI64;

fn report(p: &dyn Problem) -> Result<(), latenum::error::Error> {
    let h = audit_hierarchy(p, &p.root(), 1 << 20)?;
    let dead = cleanliness_audit(p, &p.root(), &CheckedI64, 1 << 20)?;
    println!(
        "{:<18} states {:>4} violations {} ideal {:<5} dead {}",
        p.name(),
        h.states,
        h.violations.len(),
        h.ideal,
        dead.iter().map(|k| p.describe(k)).collect::<Vec<_>>().join(" ")
    );
    Ok(())
}

fn main() -> Result<(), latenum::error::Error> {
    report(&Brackets::new(4))?;
    report(&Brackets::unclean(4))?;
    report(&DirectedAnimals::new(4, Formulation::A)?)?;
    report(&DirectedAnimals::new(4, Formulation::B)?)?;
    Ok(())
}
