//! Converts between irreducible and bridge series.

use latenum::value::{bridge_from_irreducible, irreducible_from_bridge, CheckedI64, SparseGf};

fn main() -> Result<(), latenum::error::Error> {
    let irreducible = SparseGf::from_coeffs(&CheckedI64, 1, vec![1, 1]);
    let bridge = bridge_from_irreducible(&CheckedI64, &irreducible, 10)?;
    println!("bridge = {}", bridge.render(&CheckedI64));
    let back = irreducible_from_bridge(&CheckedI64, &bridge, 10)?;
    println!("back   = {}", back.render(&CheckedI64));
    Ok(())
}
