//! Plugging in a new problem: tilings of a 1 x n strip by squares and dominoes, counted
//! by length and by number of dominoes.

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::error::Result;
use latenum::model::{Expansion, HierarchyValue, Problem, StateKey, Term};
use latenum::tm::tm_evaluate;
use latenum::value::{CheckedI64, Gf2Ring};

struct Tilings {
    length: u32,
}

fn key(rest: u32) -> StateKey {
    StateKey::new(rest.to_le_bytes().to_vec())
}

fn rest(k: &StateKey) -> u32 {
    u32::from_le_bytes(k.as_bytes().try_into().expect("4-byte key"))
}

impl Problem for Tilings {
    fn name(&self) -> &str {
        "tilings"
    }

    fn root(&self) -> StateKey {
        key(self.length)
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let r = rest(state);
        let mut e = Expansion::new();
        if r == 0 {
            e.push(Term::terminal(1));
        }
        if r >= 1 {
            e.push(Term::weighted(key(r - 1), 1, vec![1, 0]));
        }
        if r >= 2 {
            e.push(Term::weighted(key(r - 2), 1, vec![2, 1]));
        }
        Ok(e)
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        HierarchyValue::single(rest(state))
    }

    fn describe(&self, state: &StateKey) -> String {
        format!("rest {}", rest(state))
    }

    fn variable_count(&self) -> usize {
        2
    }
}

fn main() -> Result<()> {
    let p = Tilings { length: 10 };
    let ring = Gf2Ring::new(CheckedI64, 10);
    let dp = dp_evaluate(&p, &p.root(), &ring, &CacheConfig::full())?.value;
    let tm = tm_evaluate(&p, &p.root(), &ring)?.value;
    assert_eq!(dp, tm);
    for d in 0..=5 {
        println!("length 10 with {d} dominoes: {}", dp.coeff(&CheckedI64, 10, d));
    }
    Ok(())
}
