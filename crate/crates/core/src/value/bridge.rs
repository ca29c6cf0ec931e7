use super::gf::gf_neg;
use super::{gf_add, gf_mul_truncated, gf_shift, gf_truncate, SparseGf, ValueRing};
use crate::error::{Error, Result};

fn require_no_constant<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>) -> Result<()> {
    if ring.is_zero(&a.coeff(ring, 0)) {
        Ok(())
    } else {
        Err(Error::ConstantTerm)
    }
}

/// Solves `y = a + sign · x·a·y` by fixed-point iteration. Each round fixes at least one
/// more coefficient, since `x·a` has no term below `x^2`.
fn solve<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>, max_exponent: u32, negate: bool) -> Result<SparseGf<R::Elem>> {
    require_no_constant(ring, a)?;
    let a = gf_truncate(ring, a, max_exponent);
    let xa = gf_shift(&a, 1);
    let mut y = a.clone();
    for _ in 0..=max_exponent {
        let mut t = gf_mul_truncated(ring, &xa, &y, max_exponent)?;
        if negate {
            t = gf_neg(ring, &t)?;
        }
        let next = gf_add(ring, &a, &t)?;
        if next == y {
            break;
        }
        y = next;
    }
    Ok(y)
}

/// Bridge series from the irreducible series: `b = b_i / (1 - x b_i)`, truncated at
/// `max_exponent`. The input must have no constant term.
pub fn bridge_from_irreducible<R: ValueRing>(
    ring: &R,
    irreducible: &SparseGf<R::Elem>,
    max_exponent: u32,
) -> Result<SparseGf<R::Elem>> {
    solve(ring, irreducible, max_exponent, false)
}

/// Inverse transform: `b_i = b / (1 + x b)`. Requires a ring with negation.
pub fn irreducible_from_bridge<R: ValueRing>(
    ring: &R,
    bridge: &SparseGf<R::Elem>,
    max_exponent: u32,
) -> Result<SparseGf<R::Elem>> {
    solve(ring, bridge, max_exponent, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{BigRing, CheckedI64, ModRing};
    use num_bigint::BigInt;

    fn gf(offset: u32, c: &[i64]) -> SparseGf<i64> {
        SparseGf::from_coeffs(&CheckedI64, offset, c.to_vec())
    }

    #[test]
    fn single_irreducible() {
        let b = bridge_from_irreducible(&CheckedI64, &gf(1, &[1]), 7).unwrap();
        assert_eq!(b, gf(1, &[1, 0, 1, 0, 1, 0, 1]));
    }

    #[test]
    fn two_irreducibles() {
        // (x + x^2) / (1 - x^2 - x^3) = x + x^2 + x^3 + 2x^4 + 2x^5 + ...
        let b = bridge_from_irreducible(&CheckedI64, &gf(1, &[1, 1]), 5).unwrap();
        assert_eq!(b, gf(1, &[1, 1, 1, 2, 2]));
        assert_eq!(irreducible_from_bridge(&CheckedI64, &b, 5).unwrap(), gf(1, &[1, 1]));
    }

    #[test]
    fn zero_and_inverse_of_odd_series() {
        assert!(bridge_from_irreducible(&CheckedI64, &SparseGf::zero(), 6).unwrap().is_zero());
        assert!(irreducible_from_bridge(&CheckedI64, &SparseGf::zero(), 6).unwrap().is_zero());
        assert_eq!(irreducible_from_bridge(&CheckedI64, &gf(1, &[1, 0, 1, 0, 1]), 5).unwrap(), gf(1, &[1]));
    }

    #[test]
    fn constant_term_rejected() {
        assert_eq!(bridge_from_irreducible(&CheckedI64, &gf(0, &[1, 1]), 4), Err(Error::ConstantTerm));
    }

    #[test]
    fn modular_inverse_uses_negation() {
        let m = ModRing::new(10007).unwrap();
        let bi = SparseGf::from_coeffs(&m, 1, vec![2, 3, 5]);
        let b = bridge_from_irreducible(&m, &bi, 9).unwrap();
        assert_eq!(irreducible_from_bridge(&m, &b, 9).unwrap(), bi);
    }

    proptest::proptest! {
        #[test]
        fn round_trip(coeffs in proptest::collection::vec(0i64..1000, 1..10), n in 1u32..16) {
            let bi = SparseGf::from_coeffs(&BigRing, 1, coeffs.into_iter().map(BigInt::from).collect());
            let bi = gf_truncate(&BigRing, &bi, n);
            let b = bridge_from_irreducible(&BigRing, &bi, n).unwrap();
            proptest::prop_assert_eq!(irreducible_from_bridge(&BigRing, &b, n).unwrap(), bi);
        }
    }
}
