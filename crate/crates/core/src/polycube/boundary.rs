use crate::error::{Error, Result};
use crate::model::StateKey;

/// Edge-touch flags for the four lattice sides perpendicular to the layers.
pub const FLAG_MINUS_X: u8 = 1;
pub const FLAG_PLUS_X: u8 = 2;
pub const FLAG_MINUS_Y: u8 = 4;
pub const FLAG_PLUS_Y: u8 = 8;
pub const ALL_FLAGS: u8 = 15;

/// Lattice dimensions: `w` columns (x), `d` rows (y), `h` layers (z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSpec {
    pub w: u32,
    pub d: u32,
    pub h: u32,
}

impl LatticeSpec {
    pub fn new(w: u32, d: u32, h: u32) -> Result<Self> {
        if w == 0 || d == 0 || h == 0 {
            return Err(Error::Config("lattice dimensions must be positive".into()));
        }
        if w * d > 64 {
            return Err(Error::Config(format!("cross-section {w}x{d} exceeds 64 cells")));
        }
        Ok(LatticeSpec { w, d, h })
    }

    /// Dimensions sorted so that `w <= d <= h`.
    pub fn normalized(&self) -> LatticeSpec {
        let mut v = [self.w, self.d, self.h];
        v.sort_unstable();
        LatticeSpec { w: v[0], d: v[1], h: v[2] }
    }

    pub fn area(&self) -> u32 {
        self.w * self.d
    }

    pub fn cells(&self) -> u32 {
        self.w * self.d * self.h
    }

    /// Parses `WxDxH`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        let dims: Option<Vec<u32>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
        match dims.as_deref() {
            Some([w, d, h]) => LatticeSpec::new(*w, *d, *h),
            _ => Err(Error::Config(format!("lattice {s:?} is not of the form WxDxH"))),
        }
    }
}

/// Cross-section of a partially processed lattice.
///
/// Cells are processed in z, then y, then x order; `p` cells are done. With
/// `z = p / (w d)` and `k = p % (w d)`, entry `j` of `colors` is the cell at index `j` of
/// layer `z` when `j < k` and of layer `z - 1` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Boundary {
    pub p: u32,
    pub flags: u8,
    /// 0 is unoccupied; equal positive values are connected through processed cells.
    pub colors: Vec<u8>,
}

/// Relabels colors in order of first appearance, giving the lexicographically least labels
/// of the same partition.
pub fn canonicalize_colors(colors: &mut [u8]) {
    let mut map = [0u8; 256];
    let mut next = 1u8;
    for c in colors.iter_mut() {
        if *c == 0 {
            continue;
        }
        if map[*c as usize] == 0 {
            map[*c as usize] = next;
            next += 1;
        }
        *c = map[*c as usize];
    }
}

impl Boundary {
    pub fn empty(spec: &LatticeSpec) -> Self {
        Boundary { p: 0, flags: 0, colors: vec![0; spec.area() as usize] }
    }

    pub fn canonicalize(&mut self) {
        canonicalize_colors(&mut self.colors);
    }

    pub fn color_count(&self) -> u8 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.colors.iter().all(|&c| c == 0)
    }

    pub fn key(&self) -> StateKey {
        let mut b = Vec::with_capacity(5 + self.colors.len());
        b.extend_from_slice(&self.p.to_le_bytes());
        b.push(self.flags);
        b.extend_from_slice(&self.colors);
        StateKey::new(b)
    }

    pub fn decode(spec: &LatticeSpec, key: &StateKey) -> Result<Self> {
        let b = key.as_bytes();
        if b.len() != 5 + spec.area() as usize {
            return Err(Error::MalformedState {
                state: format!("{key:?}"),
                reason: "wrong boundary key length".into(),
            });
        }
        let p = u32::from_le_bytes(b[0..4].try_into().unwrap());
        if p > spec.cells() || b[4] > ALL_FLAGS {
            return Err(Error::MalformedState {
                state: format!("{key:?}"),
                reason: "kink or flags out of range".into(),
            });
        }
        Ok(Boundary { p, flags: b[4], colors: b[5..].to_vec() })
    }

    /// Mirror image in x, with the ±x flags exchanged. Only meaningful when the kink sits at
    /// the start of a row.
    pub fn mirrored(&self, spec: &LatticeSpec) -> Boundary {
        let w = spec.w as usize;
        let mut colors = vec![0; self.colors.len()];
        for (i, c) in colors.iter_mut().enumerate() {
            let (x, y) = (i % w, i / w);
            *c = self.colors[y * w + (w - 1 - x)];
        }
        canonicalize_colors(&mut colors);
        let mut flags = self.flags & (FLAG_MINUS_Y | FLAG_PLUS_Y);
        if self.flags & FLAG_MINUS_X != 0 {
            flags |= FLAG_PLUS_X;
        }
        if self.flags & FLAG_PLUS_X != 0 {
            flags |= FLAG_MINUS_X;
        }
        Boundary { p: self.p, flags, colors }
    }

    pub fn render(&self, spec: &LatticeSpec) -> String {
        let w = spec.w as usize;
        let rows: Vec<String> = self
            .colors
            .chunks(w)
            .map(|r| {
                r.iter().map(|&c| if c == 0 { '.' } else { char::from_digit(c as u32 % 36, 36).unwrap() }).collect()
            })
            .collect();
        let area = spec.area();
        let side = |f: u8, s: &'static str| if self.flags & f != 0 { s } else { "" };
        format!(
            "p={} z={} k={} [{}] sides={}{}{}{}",
            self.p,
            self.p / area,
            self.p % area,
            rows.join("/"),
            side(FLAG_MINUS_X, "-x"),
            side(FLAG_PLUS_X, "+x"),
            side(FLAG_MINUS_Y, "-y"),
            side(FLAG_PLUS_Y, "+y"),
        )
    }
}

/// Keeps the smaller, by key bytes, of a boundary and its mirror image.
pub fn reflect_canonicalize(spec: &LatticeSpec, b: &Boundary) -> Result<Boundary> {
    let k = b.p % spec.area();
    if !k.is_multiple_of(spec.w) {
        return Err(Error::KinkedReflection { kink: k as usize });
    }
    let m = b.mirrored(spec);
    Ok(if m.key() < b.key() { m } else { b.clone() })
}

/// Occupancy of every cell other than the next to be processed, starting just after it:
/// bit `j` is cell `(k + 1 + j) mod (w d)`.
pub fn group_of(spec: &LatticeSpec, b: &Boundary) -> u64 {
    let area = spec.area() as usize;
    let k = b.p as usize % area;
    (0..area - 1).fold(0u64, |g, j| if b.colors[(k + 1 + j) % area] != 0 { g | 1 << j } else { g })
}

/// Group of the child of a state in group `group`, given whether the processed cell ended
/// up occupied.
pub fn child_group(spec: &LatticeSpec, group: u64, occupied: bool) -> u64 {
    let top = spec.area() - 1;
    if top == 0 {
        return 0;
    }
    (group >> 1) | ((occupied as u64) << (top - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_colors() {
        let mut c = [2, 2, 0, 1];
        canonicalize_colors(&mut c);
        assert_eq!(c, [1, 1, 0, 2]);
        let before = c;
        canonicalize_colors(&mut c);
        assert_eq!(c, before);
    }

    proptest::proptest! {
        #[test]
        fn relabelings_share_a_key(
            labels in proptest::collection::vec(0u8..5, 1..12),
            perm in Just([1u8, 2, 3, 4]).prop_shuffle(),
        ) {
            let mut a = labels.clone();
            let mut b: Vec<u8> = labels.iter().map(|&c| if c == 0 { 0 } else { perm[c as usize - 1] }).collect();
            canonicalize_colors(&mut a);
            canonicalize_colors(&mut b);
            proptest::prop_assert_eq!(&a, &b);
            // partition preserved
            for i in 0..labels.len() {
                for j in 0..labels.len() {
                    proptest::prop_assert_eq!(labels[i] == labels[j], a[i] == a[j]);
                }
            }
        }
    }
    use proptest::prelude::{Just, Strategy};

    #[test]
    fn reflection() {
        let s = LatticeSpec::new(3, 2, 3).unwrap();
        let b = Boundary { p: 6, flags: FLAG_MINUS_X | FLAG_PLUS_Y, colors: vec![1, 0, 0, 2, 2, 0] };
        let m = b.mirrored(&s);
        assert_eq!(m.colors, vec![0, 0, 1, 0, 2, 2]);
        assert_eq!(m.flags, FLAG_PLUS_X | FLAG_PLUS_Y);
        assert_eq!(reflect_canonicalize(&s, &b).unwrap(), reflect_canonicalize(&s, &m).unwrap());
        let sym = Boundary { p: 3, flags: 0, colors: vec![1, 0, 1, 0, 2, 0] };
        assert_eq!(reflect_canonicalize(&s, &sym).unwrap(), sym);
        let kinked = Boundary { p: 4, ..b };
        assert_eq!(reflect_canonicalize(&s, &kinked), Err(Error::KinkedReflection { kink: 4 }));
    }

    #[test]
    fn group_routing_matches_direct_computation() {
        let s = LatticeSpec::new(2, 3, 4).unwrap();
        let b = Boundary { p: 8, flags: 0, colors: vec![1, 0, 1, 1, 0, 2] };
        let g = group_of(&s, &b);
        for occupied in [false, true] {
            let mut c = b.clone();
            c.p += 1;
            c.colors[2] = occupied as u8;
            assert_eq!(group_of(&s, &c), child_group(&s, g, occupied));
        }
    }

    #[test]
    fn lattice_parsing() {
        assert_eq!(LatticeSpec::parse("3x4x5").unwrap(), LatticeSpec { w: 3, d: 4, h: 5 });
        assert!(LatticeSpec::parse("3x4").is_err());
        assert_eq!(LatticeSpec::new(5, 3, 4).unwrap().normalized(), LatticeSpec { w: 3, d: 4, h: 5 });
    }
}
