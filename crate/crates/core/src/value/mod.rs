//! Value rings and the series types carried as associated values.

mod bridge;
mod crt;
mod gf;
mod gf2;
mod moments;
mod ring;

use std::fmt::Debug;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub use bridge::{bridge_from_irreducible, irreducible_from_bridge};
pub use crt::{crt_check, crt_reconstruct, ModulusSet, DEFAULT_MODULI};
pub use gf::{gf_add, gf_mul_truncated, gf_scalar_mul, gf_shift, gf_truncate, SeriesRecord, SeriesRing, SparseGf};
pub use gf2::{Gf2, Gf2Ring};
pub use moments::{moment_mean, moment_update, MomentRing, MomentVector};
pub use ring::{BigRing, CheckedI64, ModRing};

/// Arithmetic used for per-state values.
///
/// Addition must be associative and commutative with identity `zero`. Multiplication is
/// only needed by product terms under the memoizing engine.
pub trait ValueRing: Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn name(&self) -> &'static str;

    fn zero(&self) -> Self::Elem;

    fn one(&self) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) -> Result<()> {
        *acc = self.add(acc, b)?;
        Ok(())
    }

    fn scalar_mul(&self, a: &Self::Elem, k: u64) -> Result<Self::Elem>;

    fn neg(&self, _a: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::NegativeUnsupported { ring: self.name() })
    }

    fn mul(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::MulUnsupported { ring: self.name() })
    }

    /// Multiply by the monomial `x^shift[0] y^shift[1] …`. Plain rings evaluate at x = 1.
    fn shift(&self, a: &Self::Elem, _shift: &[u32]) -> Result<Self::Elem> {
        Ok(a.clone())
    }

    /// Drop the part of `a` that cannot finish when at least `bound` more units are needed.
    fn trim(&self, a: &Self::Elem, _bound: u32) -> Self::Elem {
        a.clone()
    }

    fn weigh(&self, a: &Self::Elem, scalar: u64, shift: &[u32]) -> Result<Self::Elem> {
        let scaled = if scalar == 1 { a.clone() } else { self.scalar_mul(a, scalar)? };
        if shift.iter().all(|&s| s == 0) {
            Ok(scaled)
        } else {
            self.shift(&scaled, shift)
        }
    }

    fn render(&self, a: &Self::Elem) -> String;

    /// Stable little-endian byte encoding, used by frontier dumps and duplicate detection.
    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>);

    /// Minimal bit width of the value (0 has width 1).
    fn bit_length(&self, a: &Self::Elem) -> u32;

    /// Number of stored coefficients, for series values.
    fn gf_length(&self, _a: &Self::Elem) -> Option<usize> {
        None
    }

    /// The exact integer, when the ring stores one.
    fn to_bigint(&self, _a: &Self::Elem) -> Option<BigInt> {
        None
    }
}

/// Bit width of an unsigned magnitude, with width 1 for zero.
pub(crate) fn width_u128(v: u128) -> u32 {
    (128 - v.leading_zeros()).max(1)
}
