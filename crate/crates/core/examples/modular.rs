//! Runs once per modulus and joins the residues with the Chinese remainder theorem.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::Problem;
use latenum::problems::Brackets;
use latenum::value::{crt_check, crt_reconstruct, ModRing, ModulusSet, DEFAULT_MODULI};

fn main() -> Result<(), latenum::error::Error> {
    let p = Brackets::new(40);
    let moduli = ModulusSet::new(DEFAULT_MODULI.to_vec())?;
    let residues = moduli
        .moduli()
        .iter()
        .map(|&m| Ok(dp_evaluate(&p, &p.root(), &ModRing::new(m)?, &CacheConfig::full())?.value))
        .collect::<Result<Vec<u64>, latenum::error::Error>>()?;
    println!("residues {residues:?}");
    println!("Catalan(40) = {}", crt_reconstruct(&residues, &moduli)?);

    let small = ModulusSet::new(vec![10007, 10009, 10037])?;
    let p = Brackets::new(12);
    let mut rs: Vec<u64> = small
        .moduli()
        .iter()
        .map(|&m| dp_evaluate(&p, &p.root(), &ModRing::new(m).unwrap(), &CacheConfig::full()).unwrap().value)
        .collect();
    println!("checked: {}", crt_check(&rs, &small)?);
    rs[0] = (rs[0] + 1) % 10007;
    println!("after corrupting one residue: {}", crt_check(&rs, &small).unwrap_err());
    Ok(())
}
