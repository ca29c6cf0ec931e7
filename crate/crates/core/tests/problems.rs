use std::collections::{BTreeSet, HashMap, VecDeque};

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::{audit_hierarchy, cleanliness_audit, Problem, StateKey};
use latenum::problems::oracles::diran_oracle;
use latenum::problems::{Brackets, DirAnimalState, DirectedAnimals, Formulation};
use latenum::value::CheckedI64;

fn reachable(p: &dyn Problem) -> Vec<StateKey> {
    let mut seen = BTreeSet::from([p.root()]);
    let mut queue = VecDeque::from([p.root()]);
    while let Some(s) = queue.pop_front() {
        for c in p.expand(&s).unwrap().children() {
            if seen.insert(c.clone()) {
                queue.push_back(c.clone());
            }
        }
    }
    seen.into_iter().collect()
}

fn assert_encoding_is_faithful(p: &dyn Problem) {
    let states = reachable(p);
    let mut described = HashMap::new();
    for k in &states {
        if let Some(other) = described.insert(p.describe(k), k.clone()) {
            panic!("{} and {:?} describe alike in {}", p.describe(k), other, p.name());
        }
        let level = p.hierarchy(k);
        assert_eq!(p.restore_level(&level, &p.strip_level(k)), *k);
    }
}

#[test]
fn keys_round_trip_over_reachable_sets() {
    assert_encoding_is_faithful(&Brackets::new(9));
    assert_encoding_is_faithful(&Brackets::unclean(9));
    for f in [Formulation::A, Formulation::B] {
        let p = DirectedAnimals::new(12, f).unwrap();
        assert_encoding_is_faithful(&p);
        for k in reachable(&p) {
            assert_eq!(DirAnimalState::decode(&k).unwrap().key(), k);
        }
    }
}

#[test]
fn unclean_brackets_reach_exactly_the_guarded_states() {
    for n in 1..=8u16 {
        let p = Brackets::unclean(n);
        let dead = cleanliness_audit(&p, &p.root(), &CheckedI64, 1 << 16).unwrap();
        let expected: BTreeSet<StateKey> = (1..=n).map(|k| Brackets::key(k, k - 1)).collect();
        assert_eq!(dead.into_iter().collect::<BTreeSet<_>>(), expected, "n={n}");
    }
    let clean = Brackets::new(8);
    assert!(cleanliness_audit(&clean, &clean.root(), &CheckedI64, 1 << 16).unwrap().is_empty());
}

#[test]
fn hierarchy_audits() {
    let b = Brackets::new(6);
    let h = audit_hierarchy(&b, &b.root(), 1 << 16).unwrap();
    assert!(h.violations.is_empty() && h.ideal);
    assert_eq!(h.states, 28);

    let a = DirectedAnimals::new(8, Formulation::A).unwrap();
    let ha = audit_hierarchy(&a, &a.root(), 1 << 16).unwrap();
    assert!(ha.violations.is_empty() && !ha.ideal);
    let bb = DirectedAnimals::new(8, Formulation::B).unwrap();
    let hb = audit_hierarchy(&bb, &bb.root(), 1 << 16).unwrap();
    assert!(hb.violations.is_empty() && hb.ideal);
}

#[test]
fn formulations_match_the_oracle() {
    for n in 1..=14 {
        let truth = diran_oracle(n).unwrap() as i64;
        for f in [Formulation::A, Formulation::B] {
            let p = DirectedAnimals::new(n, f).unwrap();
            assert_eq!(
                dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::full()).unwrap().value,
                truth,
                "{f:?} n={n}"
            );
        }
    }
}

#[test]
fn malformed_keys_are_rejected() {
    let p = Brackets::new(3);
    assert!(p.expand(&StateKey::new(vec![1, 2, 3])).is_err());
    assert!(DirAnimalState::decode(&StateKey::new(vec![0; 3])).is_err());
}
