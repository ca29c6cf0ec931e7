use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Primes just below 2^31, so a product of two residues fits in 64 bits.
pub const DEFAULT_MODULI: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Pairwise-coprime moduli, each greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusSet {
    moduli: Vec<u64>,
}

impl ModulusSet {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidModuli("at least one modulus is required".into()));
        }
        for (i, &m) in moduli.iter().enumerate() {
            if m < 2 || m > u32::MAX as u64 + 1 {
                return Err(Error::InvalidModuli(format!("modulus {m} must lie in 2..=2^32")));
            }
            for &n in &moduli[..i] {
                if m.gcd(&n) != 1 {
                    return Err(Error::InvalidModuli(format!("{n} and {m} are not coprime")));
                }
            }
        }
        Ok(ModulusSet { moduli })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    pub fn product(&self) -> BigUint {
        self.moduli.iter().fold(BigUint::from(1u32), |acc, &m| acc * m)
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// The unique `x` in `[0, Π m_i)` with `x ≡ r_i (mod m_i)`.
pub fn crt_reconstruct(residues: &[u64], moduli: &ModulusSet) -> Result<BigUint> {
    if residues.len() != moduli.len() {
        return Err(Error::InvalidModuli(format!("{} residues for {} moduli", residues.len(), moduli.len())));
    }
    let mut x = BigUint::zero();
    let mut product = BigUint::from(1u32);
    for (&r, &m) in residues.iter().zip(&moduli.moduli) {
        if r >= m {
            return Err(Error::InvalidModuli(format!("residue {r} is not reduced mod {m}")));
        }
        let x_mod = (&x % m).to_u64().unwrap();
        let p_mod = (&product % m).to_u64().unwrap();
        let diff = (r + m - x_mod) % m;
        let t = (diff as u128 * mod_inverse(p_mod, m) as u128 % m as u128) as u64;
        x += &product * t;
        product *= m;
    }
    Ok(x)
}

/// Whether some proper subset of the moduli, missing one modulus, reproduces `full`. That
/// holds for every honest value below the product of all moduli but the largest. A
/// corrupted residue sends the full reconstruction to an essentially random point of
/// `[0, Π m_i)`, which a leave-one-out reconstruction reaches only by accident.
fn redundantly_confirmed(residues: &[u64], moduli: &ModulusSet, full: &BigUint) -> Result<bool> {
    for skip in 0..moduli.len() {
        let rs: Vec<u64> = residues.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &r)| r).collect();
        let ms: Vec<u64> = moduli.moduli.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &m)| m).collect();
        if crt_reconstruct(&rs, &ModulusSet { moduli: ms })? == *full {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Reconstructs and cross-checks. Needs at least three moduli, and the value must fit in
/// the product of all moduli but one; otherwise the residues are reported inconsistent.
pub fn crt_check(residues: &[u64], moduli: &ModulusSet) -> Result<BigUint> {
    let full = crt_reconstruct(residues, moduli)?;
    if moduli.len() < 3 {
        return Err(Error::InvalidModuli("a cross-check needs at least three moduli".into()));
    }
    if redundantly_confirmed(residues, moduli, &full)? {
        Ok(full)
    } else {
        Err(Error::InconsistentResidues(format!(
            "no modulus is redundant for {full}: a residue is corrupt or the value needs every modulus"
        )))
    }
}
