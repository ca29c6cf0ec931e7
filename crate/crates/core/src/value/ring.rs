use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::{width_u128, ValueRing};
use crate::error::{Error, Result};

/// Native 64-bit integers; overflow is reported, never wrapped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckedI64;

impl ValueRing for CheckedI64 {
    type Elem = i64;

    fn name(&self) -> &'static str {
        "int64"
    }

    fn zero(&self) -> i64 {
        0
    }

    fn one(&self) -> i64 {
        1
    }

    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }

    fn add(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_add(*b).ok_or(Error::Overflow { ring: "int64" })
    }

    fn add_assign(&self, acc: &mut i64, b: &i64) -> Result<()> {
        *acc = acc.checked_add(*b).ok_or(Error::Overflow { ring: "int64" })?;
        Ok(())
    }

    fn scalar_mul(&self, a: &i64, k: u64) -> Result<i64> {
        i64::try_from(k).ok().and_then(|k| a.checked_mul(k)).ok_or(Error::Overflow { ring: "int64" })
    }

    fn neg(&self, a: &i64) -> Result<i64> {
        a.checked_neg().ok_or(Error::Overflow { ring: "int64" })
    }

    fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_mul(*b).ok_or(Error::Overflow { ring: "int64" })
    }

    fn render(&self, a: &i64) -> String {
        a.to_string()
    }

    fn encode(&self, a: &i64, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.to_le_bytes());
    }

    fn bit_length(&self, a: &i64) -> u32 {
        width_u128(a.unsigned_abs() as u128)
    }

    fn to_bigint(&self, a: &i64) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }
}

/// Residues modulo a single modulus `m > 1`, stored in `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModRing {
    modulus: u64,
}

impl ModRing {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 || modulus > u32::MAX as u64 + 1 {
            return Err(Error::InvalidModuli(format!("modulus {modulus} must lie in 2..=2^32")));
        }
        Ok(ModRing { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.modulus
    }
}

impl ValueRing for ModRing {
    type Elem = u64;

    fn name(&self) -> &'static str {
        "mod"
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok((a + b) % self.modulus)
    }

    fn scalar_mul(&self, a: &u64, k: u64) -> Result<u64> {
        Ok(((*a as u128 * (k % self.modulus) as u128) % self.modulus as u128) as u64)
    }

    fn neg(&self, a: &u64) -> Result<u64> {
        Ok((self.modulus - a) % self.modulus)
    }

    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        self.scalar_mul(a, *b)
    }

    fn render(&self, a: &u64) -> String {
        a.to_string()
    }

    fn encode(&self, a: &u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.to_le_bytes());
    }

    fn bit_length(&self, a: &u64) -> u32 {
        width_u128(*a as u128)
    }
}

/// Arbitrary-precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BigRing;

impl ValueRing for BigRing {
    type Elem = BigInt;

    fn name(&self) -> &'static str {
        "bigint"
    }

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::from(1)
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a + b)
    }

    fn add_assign(&self, acc: &mut BigInt, b: &BigInt) -> Result<()> {
        *acc += b;
        Ok(())
    }

    fn scalar_mul(&self, a: &BigInt, k: u64) -> Result<BigInt> {
        Ok(a * k)
    }

    fn neg(&self, a: &BigInt) -> Result<BigInt> {
        Ok(-a)
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }

    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn encode(&self, a: &BigInt, out: &mut Vec<u8>) {
        let (sign, bytes) = a.to_bytes_le();
        out.push(match sign {
            Sign::Minus => 2,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        });
        out.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        out.extend_from_slice(&bytes);
    }

    fn bit_length(&self, a: &BigInt) -> u32 {
        (a.abs().bits() as u32).max(1)
    }

    fn to_bigint(&self, a: &BigInt) -> Option<BigInt> {
        Some(a.clone())
    }
}
