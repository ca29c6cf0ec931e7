//! The problem-definition contract shared by the memoizing and the frontier engines.
//!
//! A problem is a recursively defined counting equation: every state `S` has a value
//! `f(S) = k(S) + Σ w(s,S)·f(s)` (plus optional products of child values), and a hierarchy
//! function that strictly decreases along every child edge. States are opaque canonical
//! byte strings; the engines never look inside them.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::dp::{dp_evaluate, CacheConfig};
use crate::error::{Error, Result};
use crate::value::ValueRing;

/// Default bound on distinct states visited by reachability audits.
pub const DEFAULT_STATE_LIMIT: usize = 10_000_000;

/// Canonical byte encoding of a problem state. Equal states have equal bytes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Vec<u8>);

impl StateKey {
    pub fn new(bytes: Vec<u8>) -> Self {
        StateKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }
}

impl From<Vec<u8>> for StateKey {
    fn from(bytes: Vec<u8>) -> Self {
        StateKey(bytes)
    }
}

impl fmt::Debug for StateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateKey(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Value of the hierarchy function: a tuple compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HierarchyValue(pub Vec<u32>);

impl HierarchyValue {
    pub fn single(v: u32) -> Self {
        HierarchyValue(vec![v])
    }

    pub fn pair(a: u32, b: u32) -> Self {
        HierarchyValue(vec![a, b])
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for HierarchyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermKind {
    Sum,
    Product,
    Terminal,
}

/// One summand of an expansion.
///
/// `scalar` is a positive integer multiple and `shift` holds one exponent increment per
/// tracked generating-function variable (empty for plain counting problems).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub kind: TermKind,
    pub children: Vec<StateKey>,
    pub scalar: u64,
    pub shift: Vec<u32>,
}

impl Term {
    pub fn sum(child: StateKey) -> Self {
        Term::weighted(child, 1, Vec::new())
    }

    pub fn weighted(child: StateKey, scalar: u64, shift: Vec<u32>) -> Self {
        assert!(scalar >= 1, "zero-weight terms are never emitted");
        Term { kind: TermKind::Sum, children: vec![child], scalar, shift }
    }

    pub fn product(children: Vec<StateKey>) -> Self {
        assert!(children.len() >= 2, "product terms need at least two factors");
        Term { kind: TermKind::Product, children, scalar: 1, shift: Vec::new() }
    }

    pub fn terminal(constant: u64) -> Self {
        Term::terminal_shifted(constant, Vec::new())
    }

    pub fn terminal_shifted(constant: u64, shift: Vec<u32>) -> Self {
        assert!(constant >= 1, "zero-weight terms are never emitted");
        Term { kind: TermKind::Terminal, children: Vec::new(), scalar: constant, shift }
    }
}

/// Right-hand side of `f(S)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expansion {
    pub terms: Vec<Term>,
}

impl Expansion {
    pub fn new() -> Self {
        Expansion::default()
    }

    pub fn push(&mut self, term: Term) {
        self.terms.push(term);
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Children of Sum and Product terms, in term order.
    pub fn children(&self) -> impl Iterator<Item = &StateKey> {
        self.terms.iter().flat_map(|t| t.children.iter())
    }
}

impl From<Vec<Term>> for Expansion {
    fn from(terms: Vec<Term>) -> Self {
        Expansion { terms }
    }
}

/// Lower bound on the remaining growth of a state, in units of the first tracked variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(u32),
    /// No completion exists; the state's value is zero.
    Infeasible,
}

/// A recursively defined enumeration problem.
///
/// `expand` and `hierarchy` must be pure functions of the key, so one definition can be
/// shared read-only across threads.
pub trait Problem: Sync {
    fn name(&self) -> &str;

    fn root(&self) -> StateKey;

    fn expand(&self, state: &StateKey) -> Result<Expansion>;

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue;

    fn describe(&self, state: &StateKey) -> String;

    /// Number of generating-function variables carried in term shifts.
    fn variable_count(&self) -> usize {
        0
    }

    /// Conservative completion bound used for trimming; `None` disables trimming.
    fn completion_bound(&self, _state: &StateKey) -> Option<Bound> {
        None
    }

    /// Part of the key that must be stored when the hierarchy level is known from context.
    fn strip_level(&self, state: &StateKey) -> StateKey {
        state.clone()
    }

    /// Inverse of [`Problem::strip_level`].
    fn restore_level(&self, _level: &HierarchyValue, stored: &StateKey) -> StateKey {
        stored.clone()
    }
}

/// Result of [`audit_hierarchy`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyAudit {
    /// Edges `(parent, child)` where the hierarchy does not strictly decrease.
    pub violations: Vec<(StateKey, StateKey)>,
    /// Every edge steps to the immediately smaller reachable hierarchy level.
    pub ideal: bool,
    pub states: usize,
    pub edges: usize,
    pub truncated: bool,
}

/// States, edges as (parent index, child), and whether the limit cut the sweep short.
type Sweep = (Vec<StateKey>, Vec<(usize, StateKey)>, bool);

/// Breadth-first sweep over the call graph; returns states in discovery order.
fn sweep<P: Problem + ?Sized>(problem: &P, root: &StateKey, limit: usize) -> Result<Sweep> {
    if limit == 0 {
        return Err(Error::Config("state limit must be positive".into()));
    }
    let mut seen: HashSet<StateKey> = HashSet::new();
    let mut order = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(root.clone());
    order.push(root.clone());
    queue.push_back(0usize);
    let mut truncated = false;
    while let Some(idx) = queue.pop_front() {
        let state = order[idx].clone();
        let expansion = problem.expand(&state)?;
        for child in expansion.children() {
            edges.push((idx, child.clone()));
            if !seen.contains(child) {
                if seen.len() >= limit {
                    truncated = true;
                    continue;
                }
                seen.insert(child.clone());
                order.push(child.clone());
                queue.push_back(order.len() - 1);
            }
        }
    }
    Ok((order, edges, truncated))
}

/// Checks that the hierarchy strictly decreases along every reachable edge.
pub fn audit_hierarchy<P: Problem + ?Sized>(problem: &P, root: &StateKey, limit: usize) -> Result<HierarchyAudit> {
    let (states, edges, truncated) = sweep(problem, root, limit)?;
    let levels: Vec<HierarchyValue> = states.iter().map(|s| problem.hierarchy(s)).collect();
    let index: HashMap<&StateKey, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let distinct: BTreeSet<&HierarchyValue> = levels.iter().collect();
    let rank: HashMap<&HierarchyValue, usize> = distinct.iter().enumerate().map(|(i, h)| (*h, i)).collect();

    let mut violations = Vec::new();
    let mut ideal = true;
    for (parent, child) in &edges {
        let hp = &levels[*parent];
        let hc = match index.get(child) {
            Some(&i) => levels[i].clone(),
            None => problem.hierarchy(child),
        };
        if hc >= *hp {
            violations.push((states[*parent].clone(), child.clone()));
            ideal = false;
        } else if let Some(rc) = rank.get(&hc) {
            if rank[hp] != rc + 1 {
                ideal = false;
            }
        }
    }
    Ok(HierarchyAudit { violations, ideal, states: states.len(), edges: edges.len(), truncated })
}

/// View of a problem with every term dropped that leads to a state whose completion bound
/// is infeasible. Audits run on this view see the system the frontier engine evaluates
/// with trimming on.
pub struct Trimmed<'a, P: ?Sized>(pub &'a P);

impl<P: Problem + ?Sized> Problem for Trimmed<'_, P> {
    fn name(&self) -> &str {
        self.0.name()
    }

    fn root(&self) -> StateKey {
        self.0.root()
    }

    fn expand(&self, state: &StateKey) -> Result<Expansion> {
        let mut e = self.0.expand(state)?;
        e.terms.retain(|t| t.children.iter().all(|c| self.0.completion_bound(c) != Some(Bound::Infeasible)));
        Ok(e)
    }

    fn hierarchy(&self, state: &StateKey) -> HierarchyValue {
        self.0.hierarchy(state)
    }

    fn describe(&self, state: &StateKey) -> String {
        self.0.describe(state)
    }

    fn variable_count(&self) -> usize {
        self.0.variable_count()
    }

    fn completion_bound(&self, state: &StateKey) -> Option<Bound> {
        self.0.completion_bound(state)
    }

    fn strip_level(&self, state: &StateKey) -> StateKey {
        self.0.strip_level(state)
    }

    fn restore_level(&self, level: &HierarchyValue, stored: &StateKey) -> StateKey {
        self.0.restore_level(level, stored)
    }
}

/// Number of distinct states reachable from `root`, root included.
pub fn reachable_state_count<P: Problem + ?Sized>(problem: &P, root: &StateKey, limit: usize) -> Result<usize> {
    let (states, _, truncated) = sweep(problem, root, limit)?;
    if truncated {
        return Err(Error::StateLimit { limit });
    }
    Ok(states.len())
}

/// Reachable states whose value is zero; empty exactly when the definition is clean.
pub fn cleanliness_audit<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    limit: usize,
) -> Result<Vec<StateKey>> {
    // bounds the sweep before committing to a full evaluation
    reachable_state_count(problem, root, limit)?;
    let run = dp_evaluate(problem, root, ring, &CacheConfig::full())?;
    let mut zeros: Vec<StateKey> = run.cache.iter().filter(|(_, v)| ring.is_zero(v)).map(|(k, _)| k.clone()).collect();
    zeros.sort();
    Ok(zeros)
}
