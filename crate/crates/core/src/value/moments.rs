use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::gf::gf_neg;
use super::{gf_add, gf_scalar_mul, gf_shift, gf_truncate, SparseGf, ValueRing};
use crate::error::{Error, Result};

/// Moment series `M_0 … M_m` of a tracked quantity `j`, each a series in the retained
/// variable: `M_k(x) = Σ A[i][j] x^i j^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentVector<C> {
    moments: Vec<SparseGf<C>>,
}

impl<C: Clone> MomentVector<C> {
    pub fn zero(max_order: usize) -> Self {
        MomentVector { moments: vec![SparseGf::zero(); max_order + 1] }
    }

    /// The empty object: `M_0 = 1`, higher moments zero.
    pub fn unit<R: ValueRing<Elem = C>>(ring: &R, max_order: usize) -> Self {
        let mut v = MomentVector::zero(max_order);
        v.moments[0] = SparseGf::monomial(ring, 0, ring.one());
        v
    }

    pub fn from_moments(moments: Vec<SparseGf<C>>) -> Self {
        assert!(!moments.is_empty());
        MomentVector { moments }
    }

    pub fn max_order(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moment(&self, k: usize) -> &SparseGf<C> {
        &self.moments[k]
    }

    pub fn moments(&self) -> &[SparseGf<C>] {
        &self.moments
    }

    pub fn is_zero(&self) -> bool {
        self.moments.iter().all(|m| m.is_zero())
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// New moments after adding `c` to the retained exponent and `s` to the tracked quantity:
/// `M*_m = x^c Σ_k C(m,k) s^k M_{m-k}`, computed from the pre-update moments.
pub fn moment_update<R: ValueRing>(
    ring: &R,
    moments: &MomentVector<R::Elem>,
    c: u32,
    s: i64,
) -> Result<MomentVector<R::Elem>> {
    let order = moments.max_order();
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let mut acc = SparseGf::zero();
        for k in 0..=m {
            let base = &moments.moments[m - k];
            if base.is_zero() {
                continue;
            }
            let factor = binomial(m as u64, k as u64) as i128 * (s as i128).pow(k as u32);
            if factor == 0 {
                continue;
            }
            let mag = u64::try_from(factor.unsigned_abs()).map_err(|_| Error::Overflow { ring: ring.name() })?;
            let mut term = gf_scalar_mul(ring, base, mag)?;
            if factor < 0 {
                term = gf_neg(ring, &term)?;
            }
            acc = gf_add(ring, &acc, &term)?;
        }
        out.push(gf_shift(&acc, c));
    }
    Ok(MomentVector { moments: out })
}

/// Exact mean of the tracked quantity at coefficient index `i`: `M_1[i] / M_0[i]`.
pub fn moment_mean<R: ValueRing>(ring: &R, moments: &MomentVector<R::Elem>, i: u32) -> Result<BigRational> {
    let exact = |m: usize| -> Result<BigInt> {
        let c =
            moments.moments.get(m).ok_or_else(|| Error::Config("moment order 1 not tracked".into()))?.coeff(ring, i);
        ring.to_bigint(&c).ok_or_else(|| Error::Config(format!("ring {} has no exact integer view", ring.name())))
    };
    let den = exact(0)?;
    if den.is_zero() {
        return Err(Error::ZeroDenominator { index: i });
    }
    Ok(BigRational::new(exact(1)?, den))
}

/// Moment vectors as a value ring; term shifts are `(c, s)` pairs.
#[derive(Clone, Debug)]
pub struct MomentRing<R> {
    base: R,
    max_order: usize,
    max_exponent: u32,
}

impl<R: ValueRing> MomentRing<R> {
    pub fn new(base: R, max_order: usize, max_exponent: u32) -> Self {
        MomentRing { base, max_order, max_exponent }
    }

    pub fn base(&self) -> &R {
        &self.base
    }
}

impl<R: ValueRing> ValueRing for MomentRing<R> {
    type Elem = MomentVector<R::Elem>;

    fn name(&self) -> &'static str {
        "moments"
    }

    fn zero(&self) -> Self::Elem {
        MomentVector::zero(self.max_order)
    }

    fn one(&self) -> Self::Elem {
        MomentVector::unit(&self.base, self.max_order)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let moments =
            a.moments.iter().zip(&b.moments).map(|(x, y)| gf_add(&self.base, x, y)).collect::<Result<Vec<_>>>()?;
        Ok(MomentVector { moments })
    }

    fn scalar_mul(&self, a: &Self::Elem, k: u64) -> Result<Self::Elem> {
        let moments = a.moments.iter().map(|x| gf_scalar_mul(&self.base, x, k)).collect::<Result<Vec<_>>>()?;
        Ok(MomentVector { moments })
    }

    fn shift(&self, a: &Self::Elem, shift: &[u32]) -> Result<Self::Elem> {
        let c = shift.first().copied().unwrap_or(0);
        let s = shift.get(1).copied().unwrap_or(0) as i64;
        let updated = moment_update(&self.base, a, c, s)?;
        Ok(self.trim(&updated, 0))
    }

    fn trim(&self, a: &Self::Elem, bound: u32) -> Self::Elem {
        match self.max_exponent.checked_sub(bound) {
            Some(limit) => {
                MomentVector { moments: a.moments.iter().map(|m| gf_truncate(&self.base, m, limit)).collect() }
            }
            None => self.zero(),
        }
    }

    fn render(&self, a: &Self::Elem) -> String {
        a.moments
            .iter()
            .enumerate()
            .map(|(k, m)| format!("M{k}: {}", m.render(&self.base)))
            .collect::<Vec<_>>()
            .join("; ")
    }

    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        out.extend_from_slice(&(a.moments.len() as u32).to_le_bytes());
        for m in &a.moments {
            out.extend_from_slice(&m.offset().to_le_bytes());
            out.extend_from_slice(&(m.len() as u32).to_le_bytes());
            for c in m.coeffs() {
                self.base.encode(c, out);
            }
        }
    }

    fn bit_length(&self, a: &Self::Elem) -> u32 {
        a.moments.iter().flat_map(|m| m.coeffs()).map(|c| self.base.bit_length(c)).max().unwrap_or(1)
    }

    fn gf_length(&self, a: &Self::Elem) -> Option<usize> {
        Some(a.moments[0].len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{CheckedI64, Gf2};

    fn gf(offset: u32, c: &[i64]) -> SparseGf<i64> {
        SparseGf::from_coeffs(&CheckedI64, offset, c.to_vec())
    }

    #[test]
    fn zero_increment_is_a_pure_shift() {
        let r = CheckedI64;
        let m = MomentVector::from_moments(vec![gf(1, &[2, 3]), gf(1, &[5, 7]), gf(0, &[1])]);
        let u = moment_update(&r, &m, 3, 0).unwrap();
        for k in 0..=2 {
            assert_eq!(u.moment(k), &gf_shift(m.moment(k), 3));
        }
    }

    #[test]
    fn first_moment_rule() {
        let r = CheckedI64;
        let m = MomentVector::from_moments(vec![gf(1, &[2, 3]), gf(1, &[5, 7])]);
        let u = moment_update(&r, &m, 1, 4).unwrap();
        // x (M_1 + 4 M_0)
        assert_eq!(u.moment(1), &gf(2, &[13, 19]));
    }

    #[test]
    fn signed_increment() {
        let r = CheckedI64;
        let m = MomentVector::unit(&r, 2);
        let u = moment_update(&r, &m, 0, -3).unwrap();
        assert_eq!(u.moment(1), &gf(0, &[-3]));
        assert_eq!(u.moment(2), &gf(0, &[9]));
    }

    proptest::proptest! {
        #[test]
        fn updates_match_two_variable_tracking(steps in proptest::collection::vec((0u32..3, 0u32..5), 1..8)) {
            let r = CheckedI64;
            let mut mv = MomentVector::unit(&r, 3);
            let mut g = Gf2::monomial(&r, 0, 0, 1i64);
            for &(c, s) in &steps {
                // each object either stops or takes the (c, s) step
                let stepped = moment_update(&r, &mv, c, s as i64).unwrap();
                mv = MomentVector::from_moments(
                    mv.moments().iter().zip(stepped.moments()).map(|(a, b)| gf_add(&r, a, b).unwrap()).collect());
                g = g.add(&r, &g.shift(c, s)).unwrap();
            }
            for k in 0..=3u32 {
                proptest::prop_assert_eq!(mv.moment(k as usize), &g.marginal_moment(&r, k).unwrap());
            }
        }
    }

    #[test]
    fn mean_of_a_family() {
        let r = CheckedI64;
        // three dominoes of surface 10
        let m = MomentVector::from_moments(vec![gf(2, &[3]), gf(2, &[30])]);
        assert_eq!(moment_mean(&r, &m, 2).unwrap(), BigRational::from_integer(10.into()));
        assert_eq!(moment_mean(&r, &m, 1), Err(Error::ZeroDenominator { index: 1 }));
    }
}
