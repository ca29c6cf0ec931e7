use super::Brackets;
use crate::error::{Error, Result};
use crate::model::{Expansion, HierarchyValue, Problem, StateKey, Term};

/// `Pair(a, b)` counts ordered pairs of bracket strings with `a` and `b` pairs of brackets,
/// expressed as one product of two independent bracket subproblems.
#[derive(Clone, Debug)]
pub struct FactorToy {
    a: u16,
    b: u16,
    segments: Brackets,
}

const PAIR: u8 = 0;
const SEG: u8 = 1;

impl FactorToy {
    pub fn new(a: u16, b: u16) -> Self {
        FactorToy { a, b, segments: Brackets::new(a.max(b)) }
    }

    pub fn pair_key(a: u16, b: u16) -> StateKey {
        let mut v = vec![PAIR];
        v.extend_from_slice(&a.to_le_bytes());
        v.extend_from_slice(&b.to_le_bytes());
        StateKey::new(v)
    }

    fn seg(inner: &StateKey) -> StateKey {
        let mut v = vec![SEG];
        v.extend_from_slice(inner.as_bytes());
        StateKey::new(v)
    }

    fn split(state: &StateKey) -> Result<(u8, StateKey)> {
        match state.as_bytes().split_first() {
            Some((&tag, rest)) if rest.len() == 4 && tag <= SEG => Ok((tag, StateKey::new(rest.to_vec()))),
            _ => Err(Error::MalformedState { state: format!("{state:?}"), reason: "unknown factor-toy key".into() }),
        }
    }
}

impl Problem for FactorToy {
    fn name(&self) -> &str {
        "factor-toy"
    }

    fn root(&self) -> StateKey {
        FactorToy::pair_key(self.a, self.b)
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let (tag, inner) = FactorToy::split(state)?;
        if tag == PAIR {
            let (a, b) = Brackets::decode(&inner)?;
            return Ok(vec![Term::product(vec![
                FactorToy::seg(&Brackets::key(a, a)),
                FactorToy::seg(&Brackets::key(b, b)),
            ])]
            .into());
        }
        let e = self.segments.expand(&inner)?;
        Ok(e.terms
            .into_iter()
            .map(|mut t| {
                t.children = t.children.iter().map(FactorToy::seg).collect();
                t
            })
            .collect::<Vec<_>>()
            .into())
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        let (tag, inner) = FactorToy::split(state).expect("factor-toy key");
        let (x, y) = Brackets::decode(&inner).expect("bracket key");
        if tag == PAIR {
            HierarchyValue::single(2 * x as u32 + 2 * y as u32 + 1)
        } else {
            HierarchyValue::single(x as u32 + y as u32)
        }
    }

    fn describe(&self, state: &StateKey) -> String {
        match FactorToy::split(state) {
            Ok((PAIR, inner)) => format!("Pair{}", self.segments.describe(&inner)),
            Ok((_, inner)) => format!("Seg{}", self.segments.describe(&inner)),
            Err(_) => format!("{state:?}"),
        }
    }
}
