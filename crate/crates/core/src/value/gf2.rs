use super::{gf_add, SparseGf, ValueRing};
use crate::error::Result;

/// Two-variable series `Σ A[i][j] x^i y^j` as a dense rectangle with per-axis offsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf2<C> {
    offset: (u32, u32),
    dims: (usize, usize),
    data: Vec<C>,
}

impl<C: Clone> Gf2<C> {
    pub fn zero() -> Self {
        Gf2 { offset: (0, 0), dims: (0, 0), data: Vec::new() }
    }

    pub fn monomial<R: ValueRing<Elem = C>>(ring: &R, i: u32, j: u32, coeff: C) -> Self {
        Gf2::from_dense(ring, (i, j), (1, 1), vec![coeff])
    }

    /// Builds a normalized rectangle from row-major `data` of shape `dims`.
    pub fn from_dense<R: ValueRing<Elem = C>>(
        ring: &R,
        offset: (u32, u32),
        dims: (usize, usize),
        data: Vec<C>,
    ) -> Self {
        assert_eq!(data.len(), dims.0 * dims.1);
        let (n0, n1) = dims;
        let row_nz = |i: usize| data[i * n1..(i + 1) * n1].iter().any(|c| !ring.is_zero(c));
        let col_nz = |j: usize| (0..n0).any(|i| !ring.is_zero(&data[i * n1 + j]));
        let Some(r0) = (0..n0).find(|&i| row_nz(i)) else {
            return Gf2::zero();
        };
        let r1 = (0..n0).rev().find(|&i| row_nz(i)).unwrap();
        let c0 = (0..n1).find(|&j| col_nz(j)).unwrap();
        let c1 = (0..n1).rev().find(|&j| col_nz(j)).unwrap();
        if (r0, r1, c0, c1) == (0, n0 - 1, 0, n1 - 1) {
            return Gf2 { offset, dims, data };
        }
        let w = c1 - c0 + 1;
        let mut out = Vec::with_capacity((r1 - r0 + 1) * w);
        for i in r0..=r1 {
            out.extend_from_slice(&data[i * n1 + c0..i * n1 + c1 + 1]);
        }
        Gf2 { offset: (offset.0 + r0 as u32, offset.1 + c0 as u32), dims: (r1 - r0 + 1, w), data: out }
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn offset(&self) -> (u32, u32) {
        self.offset
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn coeff<R: ValueRing<Elem = C>>(&self, ring: &R, i: u32, j: u32) -> C {
        if i < self.offset.0 || j < self.offset.1 {
            return ring.zero();
        }
        let (di, dj) = ((i - self.offset.0) as usize, (j - self.offset.1) as usize);
        if di >= self.dims.0 || dj >= self.dims.1 {
            return ring.zero();
        }
        self.data[di * self.dims.1 + dj].clone()
    }

    pub fn shift(&self, c: u32, s: u32) -> Self {
        if self.is_zero() {
            return Gf2::zero();
        }
        Gf2 { offset: (self.offset.0 + c, self.offset.1 + s), dims: self.dims, data: self.data.clone() }
    }

    /// Drops terms whose first exponent exceeds `max_exponent`.
    pub fn truncate<R: ValueRing<Elem = C>>(&self, ring: &R, max_exponent: u32) -> Self {
        if self.is_zero() || self.offset.0 + self.dims.0 as u32 <= max_exponent + 1 {
            return self.clone();
        }
        if self.offset.0 > max_exponent {
            return Gf2::zero();
        }
        let rows = (max_exponent - self.offset.0 + 1) as usize;
        Gf2::from_dense(ring, self.offset, (rows, self.dims.1), self.data[..rows * self.dims.1].to_vec())
    }

    pub fn add<R: ValueRing<Elem = C>>(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let lo0 = self.offset.0.min(other.offset.0);
        let lo1 = self.offset.1.min(other.offset.1);
        let hi0 = (self.offset.0 + self.dims.0 as u32).max(other.offset.0 + other.dims.0 as u32);
        let hi1 = (self.offset.1 + self.dims.1 as u32).max(other.offset.1 + other.dims.1 as u32);
        let (n0, n1) = ((hi0 - lo0) as usize, (hi1 - lo1) as usize);
        let mut data = vec![ring.zero(); n0 * n1];
        for g in [self, other] {
            let (b0, b1) = ((g.offset.0 - lo0) as usize, (g.offset.1 - lo1) as usize);
            for i in 0..g.dims.0 {
                for j in 0..g.dims.1 {
                    ring.add_assign(&mut data[(b0 + i) * n1 + b1 + j], &g.data[i * g.dims.1 + j])?;
                }
            }
        }
        Ok(Gf2::from_dense(ring, (lo0, lo1), (n0, n1), data))
    }

    pub fn scalar_mul<R: ValueRing<Elem = C>>(&self, ring: &R, k: u64) -> Result<Self> {
        let data = self.data.iter().map(|c| ring.scalar_mul(c, k)).collect::<Result<Vec<_>>>()?;
        Ok(Gf2::from_dense(ring, self.offset, self.dims, data))
    }

    /// `Σ_j A[i][j] j^m` as a series in the first variable.
    pub fn marginal_moment<R: ValueRing<Elem = C>>(&self, ring: &R, m: u32) -> Result<SparseGf<C>> {
        let mut out = SparseGf::zero();
        for di in 0..self.dims.0 {
            for dj in 0..self.dims.1 {
                let c = &self.data[di * self.dims.1 + dj];
                if ring.is_zero(c) {
                    continue;
                }
                let j = (self.offset.1 as usize + dj) as u64;
                let w = j.pow(m);
                if w == 0 {
                    continue;
                }
                let term = SparseGf::monomial(ring, self.offset.0 + di as u32, ring.scalar_mul(c, w)?);
                out = gf_add(ring, &out, &term)?;
            }
        }
        Ok(out)
    }

    pub fn render<R: ValueRing<Elem = C>>(&self, ring: &R) -> String {
        let mut parts = Vec::new();
        for di in 0..self.dims.0 {
            for dj in 0..self.dims.1 {
                let c = &self.data[di * self.dims.1 + dj];
                if !ring.is_zero(c) {
                    parts.push(format!(
                        "{} * x^{} y^{}",
                        ring.render(c),
                        self.offset.0 as usize + di,
                        self.offset.1 as usize + dj
                    ));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Two-variable series ring truncated in the first variable.
#[derive(Clone, Debug)]
pub struct Gf2Ring<R> {
    base: R,
    max_exponent: u32,
}

impl<R: ValueRing> Gf2Ring<R> {
    pub fn new(base: R, max_exponent: u32) -> Self {
        Gf2Ring { base, max_exponent }
    }

    pub fn base(&self) -> &R {
        &self.base
    }
}

impl<R: ValueRing> ValueRing for Gf2Ring<R> {
    type Elem = Gf2<R::Elem>;

    fn name(&self) -> &'static str {
        "series2"
    }

    fn zero(&self) -> Self::Elem {
        Gf2::zero()
    }

    fn one(&self) -> Self::Elem {
        Gf2::monomial(&self.base, 0, 0, self.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        a.add(&self.base, b)
    }

    fn scalar_mul(&self, a: &Self::Elem, k: u64) -> Result<Self::Elem> {
        a.scalar_mul(&self.base, k)
    }

    fn shift(&self, a: &Self::Elem, shift: &[u32]) -> Result<Self::Elem> {
        let c = shift.first().copied().unwrap_or(0);
        let s = shift.get(1).copied().unwrap_or(0);
        Ok(a.shift(c, s).truncate(&self.base, self.max_exponent))
    }

    fn trim(&self, a: &Self::Elem, bound: u32) -> Self::Elem {
        match self.max_exponent.checked_sub(bound) {
            Some(limit) => a.truncate(&self.base, limit),
            None => Gf2::zero(),
        }
    }

    fn render(&self, a: &Self::Elem) -> String {
        a.render(&self.base)
    }

    fn encode(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        out.extend_from_slice(&a.offset.0.to_le_bytes());
        out.extend_from_slice(&a.offset.1.to_le_bytes());
        out.extend_from_slice(&(a.dims.0 as u32).to_le_bytes());
        out.extend_from_slice(&(a.dims.1 as u32).to_le_bytes());
        for c in &a.data {
            self.base.encode(c, out);
        }
    }

    fn bit_length(&self, a: &Self::Elem) -> u32 {
        a.data.iter().map(|c| self.base.bit_length(c)).max().unwrap_or(1)
    }

    fn gf_length(&self, a: &Self::Elem) -> Option<usize> {
        Some(a.data.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::CheckedI64;

    #[test]
    fn shift_increments_both_offsets() {
        let r = CheckedI64;
        let g = Gf2::monomial(&r, 2, 3, 5);
        let s = g.shift(1, 2);
        assert_eq!(s.offset(), (3, 5));
        assert_eq!(s.coeff(&r, 3, 5), 5);
        assert!(Gf2::<i64>::zero().shift(1, 1).is_zero());
    }

    #[test]
    fn add_and_marginals() {
        let r = CheckedI64;
        // 3 x^2 y^10 + x y^6
        let g = Gf2::monomial(&r, 2, 10, 3).add(&r, &Gf2::monomial(&r, 1, 6, 1)).unwrap();
        assert_eq!(g.dims(), (2, 5));
        assert_eq!(g.coeff(&r, 1, 6), 1);
        assert_eq!(g.coeff(&r, 2, 8), 0);
        let m0 = g.marginal_moment(&r, 0).unwrap();
        let m1 = g.marginal_moment(&r, 1).unwrap();
        assert_eq!(m0.coeffs(), &[1, 3]);
        assert_eq!(m1.coeffs(), &[6, 30]);
        assert_eq!(g.truncate(&r, 1).dims(), (1, 1));
    }
}
