//! Memoized recursive evaluation with an explicit work stack.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Expansion, Problem, StateKey, TermKind};
use crate::value::ValueRing;

/// Storage policy: each computed value is kept with probability `p`, decided by a single
/// deterministic accumulator shared across the run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheConfig {
    probability: f64,
    accumulator: f64,
}

impl CacheConfig {
    pub fn full() -> Self {
        CacheConfig { probability: 1.0, accumulator: 0.0 }
    }

    pub fn with_probability(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Config(format!("store probability {p} must lie in (0, 1]")));
        }
        Ok(CacheConfig { probability: p, accumulator: 0.0 })
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn accumulator(&self) -> f64 {
        self.accumulator
    }

    /// Adds `p` to the accumulator and stores once it reaches one.
    pub fn store_decision(&mut self) -> bool {
        self.accumulator += self.probability;
        // tolerate rounding so that p = 0.1 stores exactly once per ten calls
        if self.accumulator >= 1.0 - 1e-12 {
            self.accumulator = (self.accumulator - 1.0).max(0.0);
            true
        } else {
            false
        }
    }
}

/// Free-function form of [`CacheConfig::store_decision`].
pub fn store_decision(config: &mut CacheConfig) -> bool {
    config.store_decision()
}

/// Memo table. Every present value is the complete value of its state.
#[derive(Clone, Debug)]
pub struct Cache<E> {
    map: HashMap<StateKey, E>,
    hits: u64,
    misses: u64,
    stores: u64,
}

impl<E> Default for Cache<E> {
    fn default() -> Self {
        Cache { map: HashMap::new(), hits: 0, misses: 0, stores: 0 }
    }
}

impl<E: Clone> Cache<E> {
    pub fn new() -> Self {
        Cache::default()
    }

    pub fn get(&self, key: &StateKey) -> Option<&E> {
        self.map.get(key)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateKey, &E)> {
        self.map.iter()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn stores(&self) -> u64 {
        self.stores
    }

    fn lookup(&mut self, key: &StateKey) -> Option<E> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(v.clone())
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    fn store(&mut self, key: StateKey, value: E) {
        self.stores += 1;
        self.map.insert(key, value);
    }
}

/// Counters and the bit-width histogram of stored values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub stores: u64,
    /// Number of `expand` calls made by the run.
    pub calls: u64,
    /// Minimal bit width of each stored value → number of entries.
    pub bit_length_histogram: BTreeMap<u32, u64>,
}

pub fn cache_stats<R: ValueRing>(cache: &Cache<R::Elem>, ring: &R, calls: u64) -> CacheStats {
    let mut bit_length_histogram = BTreeMap::new();
    for v in cache.map.values() {
        *bit_length_histogram.entry(ring.bit_length(v)).or_insert(0) += 1;
    }
    CacheStats {
        entries: cache.len(),
        hits: cache.hits,
        misses: cache.misses,
        stores: cache.stores,
        calls,
        bit_length_histogram,
    }
}

/// Resource caps for one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpOptions {
    /// Deepest allowed chain of open states.
    pub max_depth: usize,
    /// Most entries the cache may hold.
    pub max_entries: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { max_depth: 1 << 20, max_entries: crate::model::DEFAULT_STATE_LIMIT }
    }
}

#[derive(Clone, Debug)]
pub struct DpRun<E> {
    pub value: E,
    pub cache: Cache<E>,
    pub stats: CacheStats,
}

struct Frame<E> {
    key: StateKey,
    expansion: Expansion,
    term: usize,
    factor: usize,
    acc: E,
    product: Option<E>,
}

impl<E: Clone> Frame<E> {
    fn next_child(&self) -> Option<&StateKey> {
        self.expansion.terms.get(self.term).map(|t| &t.children[self.factor])
    }
}

fn open_frame<P: Problem + ?Sized, R: ValueRing>(problem: &P, ring: &R, key: StateKey) -> Result<Frame<R::Elem>> {
    let expansion = problem.expand(&key)?;
    let mut acc = ring.zero();
    let mut kept = Vec::with_capacity(expansion.terms.len());
    for t in expansion.terms {
        match t.kind {
            TermKind::Terminal => ring.add_assign(&mut acc, &ring.weigh(&ring.one(), t.scalar, &t.shift)?)?,
            TermKind::Product if t.children.len() < 2 => {
                return Err(Error::MalformedState {
                    state: problem.describe(&key),
                    reason: "product term with fewer than two factors".into(),
                })
            }
            _ => kept.push(t),
        }
    }
    Ok(Frame { key, expansion: Expansion { terms: kept }, term: 0, factor: 0, acc, product: None })
}

/// Folds one child value into the frame and advances its cursor.
fn absorb<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    ring: &R,
    frame: &mut Frame<R::Elem>,
    v: R::Elem,
) -> Result<()> {
    let t = &frame.expansion.terms[frame.term];
    match t.kind {
        TermKind::Sum => {
            ring.add_assign(&mut frame.acc, &ring.weigh(&v, t.scalar, &t.shift)?)?;
            frame.term += 1;
        }
        TermKind::Product => {
            let p = match frame.product.take() {
                None => v,
                Some(p) => ring.mul(&p, &v).map_err(|e| match e {
                    Error::MulUnsupported { .. } => Error::ProductTerm { state: problem.describe(&frame.key) },
                    other => other,
                })?,
            };
            frame.factor += 1;
            if frame.factor == t.children.len() {
                ring.add_assign(&mut frame.acc, &ring.weigh(&p, t.scalar, &t.shift)?)?;
                frame.term += 1;
                frame.factor = 0;
            } else {
                frame.product = Some(p);
            }
        }
        TermKind::Terminal => unreachable!("terminals are folded when the frame opens"),
    }
    Ok(())
}

/// Evaluates `f(root)` against an existing cache and accumulator. Returns the value and
/// the number of `expand` calls.
pub fn dp_evaluate_with<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    config: &mut CacheConfig,
    cache: &mut Cache<R::Elem>,
    options: &DpOptions,
) -> Result<(R::Elem, u64)> {
    if let Some(v) = cache.lookup(root) {
        return Ok((v, 0));
    }
    let mut calls = 1u64;
    let mut stack = vec![open_frame(problem, ring, root.clone())?];
    loop {
        let frame = stack.last_mut().unwrap();
        let mut descend = None;
        while let Some(child) = frame.next_child() {
            match cache.lookup(child) {
                Some(v) => absorb(problem, ring, frame, v)?,
                None => {
                    descend = Some(child.clone());
                    break;
                }
            }
        }
        if let Some(child) = descend {
            if stack.len() >= options.max_depth {
                return Err(Error::StateLimit { limit: options.max_depth });
            }
            calls += 1;
            stack.push(open_frame(problem, ring, child)?);
            continue;
        }
        let done = stack.pop().unwrap();
        let is_root = stack.is_empty();
        if is_root || config.store_decision() {
            if cache.len() >= options.max_entries {
                return Err(Error::StateLimit { limit: options.max_entries });
            }
            cache.store(done.key, done.acc.clone());
        }
        match stack.last_mut() {
            None => return Ok((done.acc, calls)),
            Some(parent) => absorb(problem, ring, parent, done.acc)?,
        }
    }
}

/// Evaluates `f(root)` from an empty cache.
pub fn dp_evaluate<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    config: &CacheConfig,
) -> Result<DpRun<R::Elem>> {
    dp_evaluate_opts(problem, root, ring, config, &DpOptions::default())
}

pub fn dp_evaluate_opts<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    config: &CacheConfig,
    options: &DpOptions,
) -> Result<DpRun<R::Elem>> {
    let mut config = *config;
    let mut cache = Cache::new();
    let (value, calls) = dp_evaluate_with(problem, root, ring, &mut config, &mut cache, options)?;
    let stats = cache_stats(&cache, ring, calls);
    Ok(DpRun { value, cache, stats })
}

/// States sharing one cached value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicateGroup {
    pub value: String,
    #[serde(skip)]
    pub keys: Vec<StateKey>,
    pub members: Vec<String>,
}

/// Groups of cached states with identical values of at least `min_value`, largest value
/// first, ties broken by smallest member key.
pub fn duplicate_value_report<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    ring: &R,
    cache: &Cache<R::Elem>,
    min_value: &BigInt,
    min_group_size: usize,
) -> Result<Vec<DuplicateGroup>> {
    let mut by_value: HashMap<BigInt, Vec<StateKey>> = HashMap::new();
    for (k, v) in cache.iter() {
        let exact = ring
            .to_bigint(v)
            .ok_or_else(|| Error::Config(format!("ring {} has no exact integer view", ring.name())))?;
        if &exact >= min_value {
            by_value.entry(exact).or_default().push(k.clone());
        }
    }
    let mut groups: Vec<(BigInt, Vec<StateKey>)> =
        by_value.into_iter().filter(|(_, ks)| ks.len() >= min_group_size.max(1)).collect();
    for (_, ks) in &mut groups {
        ks.sort();
    }
    groups.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1[0].cmp(&b.1[0])));
    Ok(groups
        .into_iter()
        .map(|(v, keys)| DuplicateGroup {
            value: v.to_string(),
            members: keys.iter().map(|k| problem.describe(k)).collect(),
            keys,
        })
        .collect())
}

/// Plain-text rendering of a duplicate report, one group per line.
pub fn render_duplicate_report(groups: &[DuplicateGroup]) -> String {
    let mut out = String::new();
    for g in groups {
        out.push_str(&format!("{} x{}: {}\n", g.value, g.members.len(), g.members.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_sequences() {
        let mut c = CacheConfig::with_probability(0.5).unwrap();
        let seq: Vec<bool> = (0..4).map(|_| c.store_decision()).collect();
        assert_eq!(seq, [false, true, false, true]);
        let mut c = CacheConfig::with_probability(0.3).unwrap();
        assert_eq!((0..10).filter(|_| c.store_decision()).count(), 3);
        let mut c = CacheConfig::full();
        assert!((0..5).all(|_| store_decision(&mut c)));
        assert!(CacheConfig::with_probability(0.0).is_err());
        assert!(CacheConfig::with_probability(1.5).is_err());
    }

    #[test]
    fn store_count_is_floor_or_ceil() {
        for &p in &[0.1, 0.3, 0.7, 0.25, 0.9] {
            let mut c = CacheConfig::with_probability(p).unwrap();
            for n in 1..=200u32 {
                let trues = (0..n).filter(|_| c.store_decision()).count() as f64;
                let exact = n as f64 * p;
                assert!(trues >= exact.floor() - 1e-9 && trues <= exact.ceil() + 1e-9, "p={p} n={n}");
                c = CacheConfig::with_probability(p).unwrap();
            }
        }
    }

    #[test]
    fn empty_cache_stats() {
        let cache: Cache<i64> = Cache::new();
        assert_eq!(cache_stats(&cache, &crate::value::CheckedI64, 0), CacheStats::default());
    }
}
