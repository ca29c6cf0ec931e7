//! Directed site animals on the square lattice, rotated so that the children of a site are
//! the two sites below it (down-left and down-right).
//!
//! A boundary is a pair of bit rows. `cur` holds the grey sites of the row being decided
//! and `next` the grey sites already known in the row below. A site at bit `b` has children
//! at bits `b` and `b + 1` of the row below. Both rows are shifted together so that the
//! lowest set bit sits at position 0, which is what makes keys canonical.

use crate::error::{Error, Result};
use crate::model::{Expansion, HierarchyValue, Problem, StateKey, Term};

/// Largest supported animal size; rows must fit in 64 bits.
pub const MAX_SITES: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// One grey site at a time: each is either unoccupied or occupied.
    A,
    /// Skip grey sites until the next occupied one.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirAnimalState {
    pub cur: u64,
    pub next: u64,
    /// Sites still to be placed.
    pub n: u32,
}

impl DirAnimalState {
    /// Canonical form: rows advance when `cur` is exhausted, then shift down to bit 0.
    pub fn canonical(cur: u64, next: u64, n: u32) -> Self {
        let (cur, next) = if cur == 0 { (next, 0) } else { (cur, next) };
        let tz = (cur | next).trailing_zeros().min(63);
        if cur | next == 0 {
            return DirAnimalState { cur: 0, next: 0, n };
        }
        DirAnimalState { cur: cur >> tz, next: next >> tz, n }
    }

    pub fn key(&self) -> StateKey {
        let mut b = (self.n as u16).to_le_bytes().to_vec();
        b.extend_from_slice(&self.cur.to_le_bytes());
        b.extend_from_slice(&self.next.to_le_bytes());
        StateKey::new(b)
    }

    pub fn decode(key: &StateKey) -> Result<Self> {
        let b = key.as_bytes();
        if b.len() != 18 {
            return Err(Error::MalformedState {
                state: format!("{key:?}"),
                reason: "boundary keys are 18 bytes".into(),
            });
        }
        Ok(DirAnimalState {
            n: u16::from_le_bytes([b[0], b[1]]) as u32,
            cur: u64::from_le_bytes(b[2..10].try_into().unwrap()),
            next: u64::from_le_bytes(b[10..18].try_into().unwrap()),
        })
    }

    pub fn greys(&self) -> u32 {
        self.cur.count_ones() + self.next.count_ones()
    }
}

#[derive(Clone, Debug)]
pub struct DirectedAnimals {
    sites: u32,
    formulation: Formulation,
}

impl DirectedAnimals {
    pub fn new(sites: u32, formulation: Formulation) -> Result<Self> {
        if sites == 0 || sites > MAX_SITES {
            return Err(Error::Config(format!("directed animal size must lie in 1..={MAX_SITES}")));
        }
        Ok(DirectedAnimals { sites, formulation })
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    fn check(&self, s: &DirAnimalState, key: &StateKey) -> Result<()> {
        let canonical = DirAnimalState::canonical(s.cur, s.next, s.n);
        if s.n > 0 && (s.cur == 0 || canonical != *s) {
            return Err(Error::MalformedState {
                state: self.describe(key),
                reason: "boundary is not canonical".into(),
            });
        }
        Ok(())
    }
}

fn render_row(bits: u64) -> String {
    format!("{bits:b}")
}

impl Problem for DirectedAnimals {
    fn name(&self) -> &str {
        match self.formulation {
            Formulation::A => "diran-a",
            Formulation::B => "diran-b",
        }
    }

    fn root(&self) -> StateKey {
        DirAnimalState { cur: 1, next: 0, n: self.sites }.key()
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let s = DirAnimalState::decode(state)?;
        let mut e = Expansion::new();
        if s.n == 0 {
            e.push(Term::terminal(1));
            return Ok(e);
        }
        self.check(&s, state)?;
        match self.formulation {
            Formulation::A => {
                let b = s.cur.trailing_zeros();
                let rest = s.cur & !(1u64 << b);
                // leaving the last grey site empty would end growth early
                if !(rest == 0 && s.next == 0) {
                    e.push(Term::sum(DirAnimalState::canonical(rest, s.next, s.n).key()));
                }
                e.push(Term::sum(DirAnimalState::canonical(rest, s.next | (3u64 << b), s.n - 1).key()));
            }
            Formulation::B => {
                let mut bits = s.cur;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    let cur = s.cur & !((2u64 << b) - 1);
                    e.push(Term::sum(DirAnimalState::canonical(cur, s.next | (3u64 << b), s.n - 1).key()));
                }
                let mut bits = s.next;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    let cur = s.next & !((2u64 << b) - 1);
                    e.push(Term::sum(DirAnimalState::canonical(cur, 3u64 << b, s.n - 1).key()));
                }
            }
        }
        Ok(e)
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        let s = DirAnimalState::decode(state).expect("boundary key");
        match self.formulation {
            Formulation::A => HierarchyValue::pair(s.n, s.greys()),
            Formulation::B => HierarchyValue::single(s.n),
        }
    }

    fn describe(&self, state: &StateKey) -> String {
        match DirAnimalState::decode(state) {
            Ok(s) => format!("f({},{},{})", render_row(s.cur), render_row(s.next), s.n),
            Err(_) => format!("{state:?}"),
        }
    }

    /// The site budget is part of every level, so it is dropped from stored keys.
    fn strip_level(&self, state: &StateKey) -> StateKey {
        StateKey::new(state.as_bytes()[2..].to_vec())
    }

    fn restore_level(&self, level: &HierarchyValue, stored: &StateKey) -> StateKey {
        let mut b = (level.0[0] as u16).to_le_bytes().to_vec();
        b.extend_from_slice(stored.as_bytes());
        StateKey::new(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(cur: u64, next: u64, n: u32) -> StateKey {
        DirAnimalState { cur, next, n }.key()
    }

    fn kids(p: &DirectedAnimals, k: &StateKey) -> Vec<String> {
        p.expand(k).unwrap().children().map(|c| p.describe(c)).collect()
    }

    #[test]
    fn table_rule_for_two_greys() {
        let a = DirectedAnimals::new(5, Formulation::A).unwrap();
        assert_eq!(kids(&a, &st(0b11, 0, 5)), ["f(1,0,5)", "f(10,11,4)"]);
    }

    #[test]
    fn last_grey_must_be_occupied() {
        let a = DirectedAnimals::new(5, Formulation::A).unwrap();
        assert_eq!(kids(&a, &st(1, 0, 3)), ["f(11,0,2)"]);
    }

    #[test]
    fn budget_zero_is_terminal() {
        for f in [Formulation::A, Formulation::B] {
            let p = DirectedAnimals::new(4, f).unwrap();
            assert_eq!(p.expand(&st(0b101, 0b11, 0)).unwrap().terms, vec![Term::terminal(1)]);
        }
    }

    #[test]
    fn formulation_b_choices() {
        let b = DirectedAnimals::new(4, Formulation::B).unwrap();
        assert_eq!(kids(&b, &st(0b11, 0, 3)), ["f(10,11,2)", "f(11,0,2)"]);
        assert_eq!(kids(&b, &st(0b10, 0b11, 2)), ["f(111,0,1)", "f(10,11,1)", "f(11,0,1)"]);
    }

    #[test]
    fn occupiable_sites_merge_histories() {
        // Three consecutive occupied sites, versus the same row with its middle site empty:
        // both leave the same four sites occupiable below, so with equal budgets left they
        // are one state.
        let children = |occupied: &[u32]| occupied.iter().fold(0u64, |acc, &b| acc | (3u64 << b));
        let a = DirAnimalState::canonical(0, children(&[0, 1, 2]), 3);
        let b = DirAnimalState::canonical(0, children(&[0, 2]), 3);
        assert_eq!(a.key(), b.key());
        let p = DirectedAnimals::new(6, Formulation::B).unwrap();
        assert_eq!(p.describe(&a.key()), "f(1111,0,3)");
    }

    #[test]
    fn stripped_keys_round_trip() {
        for f in [Formulation::A, Formulation::B] {
            let p = DirectedAnimals::new(6, f).unwrap();
            let k = st(0b101, 0b110, 4);
            let level = p.hierarchy(&k);
            assert_eq!(p.restore_level(&level, &p.strip_level(&k)), k);
        }
    }
}
