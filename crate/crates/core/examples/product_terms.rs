//! A definition with product terms: fine for the memoizing engine, rejected by the
//! frontier engine.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::Problem;
use latenum::problems::FactorToy;
use latenum::tm::tm_evaluate;
use latenum::value::CheckedI64;

fn main() -> Result<(), latenum::error::Error> {
    let p = FactorToy::new(5, 3);
    let v = dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::full())?.value;
    println!("C(5) * C(3) = {v}");
    match tm_evaluate(&p, &p.root(), &CheckedI64) {
        Ok(run) => println!("unexpected tm value {}", run.value),
        Err(e) => println!("tm: {e}"),
    }
    Ok(())
}
