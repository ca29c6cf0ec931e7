//! Counts balanced bracket strings with the memoizing engine and prints cache statistics.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::Problem;
use latenum::problems::Brackets;
use latenum::value::BigRing;

fn main() -> Result<(), latenum::error::Error> {
    for n in [5u16, 10, 50] {
        let p = Brackets::new(n);
        let run = dp_evaluate(&p, &p.root(), &BigRing, &CacheConfig::full())?;
        println!("n={n:>3}  count={}  cached states={}", run.value, run.stats.entries);
    }
    Ok(())
}
