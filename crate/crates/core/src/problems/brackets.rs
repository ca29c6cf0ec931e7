use crate::error::{Error, Result};
use crate::model::{Expansion, HierarchyValue, Problem, StateKey, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketVariant {
    /// Treats `o = c > 0` separately so no state with `o > c` is ever reached.
    Clean,
    /// Omits the `o = c` case; reaches states that count nothing.
    Unclean,
}

/// Well-formed bracket strings. A state `(o, c)` holds the open and closing brackets
/// still to be written.
#[derive(Clone, Debug)]
pub struct Brackets {
    pairs: u16,
    variant: BracketVariant,
}

impl Brackets {
    pub fn new(pairs: u16) -> Self {
        Brackets { pairs, variant: BracketVariant::Clean }
    }

    pub fn unclean(pairs: u16) -> Self {
        Brackets { pairs, variant: BracketVariant::Unclean }
    }

    pub fn key(o: u16, c: u16) -> StateKey {
        let mut b = o.to_le_bytes().to_vec();
        b.extend_from_slice(&c.to_le_bytes());
        StateKey::new(b)
    }

    pub fn decode(key: &StateKey) -> Result<(u16, u16)> {
        match key.as_bytes() {
            [o0, o1, c0, c1] => Ok((u16::from_le_bytes([*o0, *o1]), u16::from_le_bytes([*c0, *c1]))),
            _ => Err(Error::MalformedState { state: format!("{key:?}"), reason: "bracket keys are 4 bytes".into() }),
        }
    }
}

impl Problem for Brackets {
    fn name(&self) -> &str {
        match self.variant {
            BracketVariant::Clean => "brackets",
            BracketVariant::Unclean => "brackets-unclean",
        }
    }

    fn root(&self) -> StateKey {
        Brackets::key(self.pairs, self.pairs)
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let (o, c) = Brackets::decode(state)?;
        let mut e = Expansion::new();
        match self.variant {
            BracketVariant::Clean => {
                if o > c {
                    return Err(Error::MalformedState {
                        state: self.describe(state),
                        reason: "more opening than closing brackets left".into(),
                    });
                }
                if o == 0 && c == 0 {
                    e.push(Term::terminal(1));
                } else if o == c {
                    e.push(Term::sum(Brackets::key(o - 1, c)));
                } else if o == 0 {
                    e.push(Term::sum(Brackets::key(0, c - 1)));
                } else {
                    e.push(Term::sum(Brackets::key(o - 1, c)));
                    e.push(Term::sum(Brackets::key(o, c - 1)));
                }
            }
            BracketVariant::Unclean => {
                if o > c {
                    // guarded to zero, but the o = c case no longer keeps it unreachable
                } else if o == 0 && c == 0 {
                    e.push(Term::terminal(1));
                } else if o == 0 {
                    e.push(Term::sum(Brackets::key(0, c - 1)));
                } else {
                    e.push(Term::sum(Brackets::key(o - 1, c)));
                    e.push(Term::sum(Brackets::key(o, c - 1)));
                }
            }
        }
        Ok(e)
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        let (o, c) = Brackets::decode(state).expect("bracket key");
        HierarchyValue::single(o as u32 + c as u32)
    }

    fn describe(&self, state: &StateKey) -> String {
        match Brackets::decode(state) {
            Ok((o, c)) => format!("({o},{c})"),
            Err(_) => format!("{state:?}"),
        }
    }

    /// Only `o` is stored; `c` follows from the level `o + c`.
    fn strip_level(&self, state: &StateKey) -> StateKey {
        StateKey::new(state.as_bytes()[..2].to_vec())
    }

    fn restore_level(&self, level: &HierarchyValue, stored: &StateKey) -> StateKey {
        let o = u16::from_le_bytes([stored.as_bytes()[0], stored.as_bytes()[1]]);
        Brackets::key(o, (level.0[0] - o as u32) as u16)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TermKind;

    fn children(p: &Brackets, o: u16, c: u16) -> Vec<(u16, u16)> {
        p.expand(&Brackets::key(o, c)).unwrap().children().map(|k| Brackets::decode(k).unwrap()).collect()
    }

    #[test]
    fn expansion_rules() {
        let p = Brackets::new(3);
        let t = p.expand(&Brackets::key(0, 0)).unwrap();
        assert_eq!(t.terms, vec![Term::terminal(1)]);
        assert_eq!(t.terms[0].kind, TermKind::Terminal);
        assert_eq!(children(&p, 3, 3), vec![(2, 3)]);
        assert_eq!(children(&p, 2, 3), vec![(1, 3), (2, 2)]);
        assert_eq!(children(&p, 0, 2), vec![(0, 1)]);
        assert!(p.expand(&Brackets::key(3, 2)).is_err());
        assert_eq!(children(&Brackets::unclean(3), 3, 3), vec![(2, 3), (3, 2)]);
    }

    #[test]
    fn stripped_keys_round_trip() {
        let p = Brackets::new(5);
        for o in 0..=5u16 {
            for c in o..=5 {
                let k = Brackets::key(o, c);
                let level = p.hierarchy(&k);
                let stored = p.strip_level(&k);
                assert_eq!(stored.len(), 2);
                assert_eq!(p.restore_level(&level, &stored), k);
                assert_eq!(p.strip_level(&p.restore_level(&level, &stored)), stored);
            }
        }
    }
}
