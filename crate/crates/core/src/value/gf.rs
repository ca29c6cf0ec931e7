use serde::{Deserialize, Serialize};

use super::ValueRing;
use crate::error::Result;

/// A one-variable generating function stored as a start exponent plus a dense block.
///
/// Normalized: the block is empty (the zero series) or its first and last entries are
/// non-zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseGf<C> {
    offset: u32,
    coeffs: Vec<C>,
}

impl<C: Clone> SparseGf<C> {
    pub fn zero() -> Self {
        SparseGf { offset: 0, coeffs: Vec::new() }
    }

    /// Builds a normalized series from a raw block starting at `offset`.
    pub fn from_coeffs<R: ValueRing<Elem = C>>(ring: &R, offset: u32, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| ring.is_zero(c)).count();
        if lead == coeffs.len() {
            return SparseGf::zero();
        }
        coeffs.drain(..lead);
        SparseGf { offset: offset + lead as u32, coeffs }
    }

    pub fn monomial<R: ValueRing<Elem = C>>(ring: &R, exponent: u32, coeff: C) -> Self {
        SparseGf::from_coeffs(ring, exponent, vec![coeff])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a non-zero coefficient.
    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent present, if any.
    pub fn top(&self) -> Option<u32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset + self.coeffs.len() as u32 - 1)
        }
    }

    pub fn coeff<R: ValueRing<Elem = C>>(&self, ring: &R, exponent: u32) -> C {
        if exponent < self.offset {
            return ring.zero();
        }
        self.coeffs.get((exponent - self.offset) as usize).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn render<R: ValueRing<Elem = C>>(&self, ring: &R) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, c)| format!("{} * x^{}", ring.render(c), self.offset as usize + i))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_record<R: ValueRing<Elem = C>>(&self, ring: &R) -> SeriesRecord {
        SeriesRecord { offset: self.offset, coeffs: self.coeffs.iter().map(|c| ring.render(c)).collect() }
    }

    /// Dense coefficient list `[a_0, a_1, …, a_top]`.
    pub fn to_dense<R: ValueRing<Elem = C>>(&self, ring: &R) -> Vec<C> {
        match self.top() {
            None => Vec::new(),
            Some(top) => (0..=top).map(|e| self.coeff(ring, e)).collect(),
        }
    }
}

/// JSON form of a series: offset plus exact decimal coefficient strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub offset: u32,
    pub coeffs: Vec<String>,
}

pub fn gf_add<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>, b: &SparseGf<R::Elem>) -> Result<SparseGf<R::Elem>> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    let lo = a.offset.min(b.offset);
    let hi = a.top().unwrap().max(b.top().unwrap());
    let mut coeffs = vec![ring.zero(); (hi - lo + 1) as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.offset - lo) as usize + i] = c.clone();
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        ring.add_assign(&mut coeffs[(b.offset - lo) as usize + i], c)?;
    }
    Ok(SparseGf::from_coeffs(ring, lo, coeffs))
}

fn gf_add_assign<R: ValueRing>(ring: &R, acc: &mut SparseGf<R::Elem>, b: &SparseGf<R::Elem>) -> Result<()> {
    if b.is_zero() {
        return Ok(());
    }
    if !acc.is_zero() && acc.offset <= b.offset && acc.top() >= b.top() {
        let base = (b.offset - acc.offset) as usize;
        for (i, c) in b.coeffs.iter().enumerate() {
            ring.add_assign(&mut acc.coeffs[base + i], c)?;
        }
        if acc.coeffs.first().is_some_and(|c| ring.is_zero(c)) || acc.coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            *acc = SparseGf::from_coeffs(ring, acc.offset, std::mem::take(&mut acc.coeffs));
        }
        return Ok(());
    }
    *acc = gf_add(ring, acc, b)?;
    Ok(())
}

/// Multiplies by `x^shift`.
pub fn gf_shift<C: Clone>(a: &SparseGf<C>, shift: u32) -> SparseGf<C> {
    if a.is_zero() {
        return SparseGf::zero();
    }
    SparseGf { offset: a.offset + shift, coeffs: a.coeffs.clone() }
}

/// Drops every coefficient above `max_exponent`.
pub fn gf_truncate<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>, max_exponent: u32) -> SparseGf<R::Elem> {
    match a.top() {
        None => SparseGf::zero(),
        Some(top) if top <= max_exponent => a.clone(),
        Some(_) if a.offset > max_exponent => SparseGf::zero(),
        Some(_) => {
            let keep = (max_exponent - a.offset + 1) as usize;
            SparseGf::from_coeffs(ring, a.offset, a.coeffs[..keep].to_vec())
        }
    }
}

pub fn gf_scalar_mul<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>, k: u64) -> Result<SparseGf<R::Elem>> {
    let coeffs = a.coeffs.iter().map(|c| ring.scalar_mul(c, k)).collect::<Result<Vec<_>>>()?;
    Ok(SparseGf::from_coeffs(ring, a.offset, coeffs))
}

pub(crate) fn gf_neg<R: ValueRing>(ring: &R, a: &SparseGf<R::Elem>) -> Result<SparseGf<R::Elem>> {
    let coeffs = a.coeffs.iter().map(|c| ring.neg(c)).collect::<Result<Vec<_>>>()?;
    Ok(SparseGf::from_coeffs(ring, a.offset, coeffs))
}

/// Product of two series, keeping exponents up to `max_exponent`.
pub fn gf_mul_truncated<R: ValueRing>(
    ring: &R,
    a: &SparseGf<R::Elem>,
    b: &SparseGf<R::Elem>,
    max_exponent: u32,
) -> Result<SparseGf<R::Elem>> {
    if a.is_zero() || b.is_zero() || a.offset + b.offset > max_exponent {
        return Ok(SparseGf::zero());
    }
    let lo = a.offset + b.offset;
    let hi = (a.top().unwrap() + b.top().unwrap()).min(max_exponent);
    let mut coeffs = vec![ring.zero(); (hi - lo + 1) as usize];
    for (i, ca) in a.coeffs.iter().enumerate() {
        if lo + i as u32 > hi {
            break;
        }
        for (j, cb) in b.coeffs.iter().enumerate() {
            let e = i + j;
            if lo + e as u32 > hi {
                break;
            }
            let p = ring.mul(ca, cb)?;
            ring.add_assign(&mut coeffs[e], &p)?;
        }
    }
    Ok(SparseGf::from_coeffs(ring, lo, coeffs))
}

/// Series in one variable over a coefficient ring, truncated at a fixed order.
#[derive(Clone, Debug)]
pub struct SeriesRing<R> {
    base: R,
    max_exponent: u32,
}

impl<R: ValueRing> SeriesRing<R> {
    pub fn new(base: R, max_exponent: u32) -> Self {
        SeriesRing { base, max_exponent }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn max_exponent(&self) -> u32 {
        self.max_exponent
    }
}

impl<R: ValueRing> ValueRing for SeriesRing<R> {
    type Elem = SparseGf<R::Elem>;

    fn name(&self) -> &'static str {
        "series"
    }

    fn zero(&self) -> Self::Elem {
        SparseGf::zero()
    }

    fn one(&self) -> Self::Elem {
        SparseGf::monomial(&self.base, 0, self.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        gf_add(&self.base, a, b)
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) -> Result<()> {
        gf_add_assign(&self.base, acc, b)
    }

    fn scalar_mul(&self, a: &Self::Elem, k: u64) -> Result<Self::Elem> {
        gf_scalar_mul(&self.base, a, k)
    }

    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem> {
        gf_neg(&self.base, a)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        gf_mul_truncated(&self.base, a, b, self.max_exponent)
    }

    fn shift(&self, a: &Self::Elem, shift: &[u32]) -> Result<Self::Elem> {
        let s = shift.first().copied().unwrap_or(0);
        Ok(gf_truncate(&self.base, &gf_shift(a, s), self.max_exponent))
    }

    fn trim(&self, a: &Self::Elem, bound: u32) -> Self::Elem {
        match self.max_exponent.checked_sub(bound) {
            Some(limit) => gf_truncate(&self.base, a, limit),
            None => SparseGf::zero(),
        }
    }

    fn render(&self, a: &Self::Elem) -> String {
        a.render(&self.base)
    }

    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.offset.to_le_bytes());
        out.extend_from_slice(&(a.coeffs.len() as u32).to_le_bytes());
        for c in &a.coeffs {
            self.base.encode(c, out);
        }
    }

    fn bit_length(&self, a: &Self::Elem) -> u32 {
        a.coeffs.iter().map(|c| self.base.bit_length(c)).max().unwrap_or(1)
    }

    fn gf_length(&self, a: &Self::Elem) -> Option<usize> {
        Some(a.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::CheckedI64;

    fn gf(offset: u32, c: &[i64]) -> SparseGf<i64> {
        SparseGf::from_coeffs(&CheckedI64, offset, c.to_vec())
    }

    #[test]
    fn aligned_addition() {
        let r = CheckedI64;
        assert_eq!(gf_add(&r, &gf(2, &[1, 0, 3]), &gf(3, &[5])).unwrap(), gf(2, &[1, 5, 3]));
        assert_eq!(gf_add(&r, &gf(2, &[1, 0, 3]), &SparseGf::zero()).unwrap(), gf(2, &[1, 0, 3]));
    }

    #[test]
    fn normalization_strips_zero_ends() {
        let a = gf(1, &[0, 0, 4, 0, 2, 0]);
        assert_eq!(a.offset(), 3);
        assert_eq!(a.coeffs(), &[4, 0, 2]);
        assert!(gf(5, &[0, 0]).is_zero());
    }

    #[test]
    fn shift_moves_offset() {
        assert_eq!(gf_shift(&gf(0, &[1]), 4), gf(4, &[1]));
        assert!(gf_shift(&SparseGf::<i64>::zero(), 3).is_zero());
    }

    #[test]
    fn truncation_cases() {
        let r = CheckedI64;
        assert_eq!(gf_truncate(&r, &gf(3, &[1, 1, 1]), 4), gf(3, &[1, 1]));
        assert!(gf_truncate(&r, &gf(3, &[1, 1, 1]), 2).is_zero());
        assert_eq!(gf_truncate(&r, &gf(3, &[1, 1, 1]), 9), gf(3, &[1, 1, 1]));
    }

    #[test]
    fn truncated_product() {
        let r = CheckedI64;
        // (x + x^2)^2 = x^2 + 2x^3 + x^4
        let a = gf(1, &[1, 1]);
        assert_eq!(gf_mul_truncated(&r, &a, &a, 10).unwrap(), gf(2, &[1, 2, 1]));
        assert_eq!(gf_mul_truncated(&r, &a, &a, 3).unwrap(), gf(2, &[1, 2]));
        assert!(gf_mul_truncated(&r, &a, &a, 1).unwrap().is_zero());
    }

    #[test]
    fn series_ring_trim_and_render() {
        let s = SeriesRing::new(CheckedI64, 6);
        let a = gf(2, &[1, 2, 3, 4]);
        assert_eq!(s.trim(&a, 2), gf(2, &[1, 2, 3]));
        assert!(s.trim(&a, 7).is_zero());
        assert_eq!(s.render(&gf(1, &[1, 3])), "1 * x^1 + 3 * x^2");
        assert_eq!(s.render(&SparseGf::zero()), "0");
        assert_eq!(s.shift(&a, &[3]).unwrap(), gf(5, &[1, 2]));
    }

    proptest::proptest! {
        #[test]
        fn add_and_shift_commute_with_projection(
            oa in 0u32..6, ca in proptest::collection::vec(0i64..5, 0..6),
            ob in 0u32..6, cb in proptest::collection::vec(0i64..5, 0..6),
            s in 0u32..5,
        ) {
            let r = CheckedI64;
            let a = gf(oa, &ca);
            let b = gf(ob, &cb);
            let sum = gf_add(&r, &a, &b).unwrap();
            let shifted = gf_shift(&a, s);
            for e in 0..20 {
                proptest::prop_assert_eq!(sum.coeff(&r, e), a.coeff(&r, e) + b.coeff(&r, e));
                let expect = if e >= s { a.coeff(&r, e - s) } else { 0 };
                proptest::prop_assert_eq!(shifted.coeff(&r, e), expect);
            }
        }
    }
}
