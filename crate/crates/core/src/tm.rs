//! Level-synchronous frontier evaluation, highest hierarchy level first.

use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use crate::dp::{dp_evaluate, CacheConfig};
use crate::error::{Error, Result};
use crate::model::{Bound, HierarchyValue, Problem, StateKey, TermKind};
use crate::value::{SeriesRing, SparseGf, ValueRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TmOptions {
    /// Most states allowed live at once across the current frontier and pending buckets.
    pub state_limit: usize,
    /// Apply the problem's completion bound to every state before it is expanded.
    pub trim: bool,
}

impl Default for TmOptions {
    fn default() -> Self {
        TmOptions { state_limit: crate::model::DEFAULT_STATE_LIMIT, trim: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: Vec<u32>,
    /// Distinct states in the frontier when the level became current.
    pub states: usize,
    /// States waiting in lower buckets at that moment.
    pub pending: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub levels: Vec<LevelStats>,
    pub expansions: u64,
    /// Largest single frontier.
    pub peak_frontier_states: usize,
    /// Largest number of simultaneously stored states: the frontier being processed plus
    /// every bucket it feeds.
    pub peak_live_states: usize,
    /// Stored series length → number of expanded states carrying a series of that length.
    pub gf_length_histogram: BTreeMap<usize, u64>,
    /// States dropped by trimming (infeasible or fully truncated).
    pub trimmed_states: u64,
    pub groups_processed: u64,
    /// Hash of the serialized group outputs in merge order (grouped runs only).
    pub frontier_digest: u64,
}

#[derive(Clone, Debug)]
pub struct TmRun<E> {
    pub value: E,
    pub stats: RunStats,
    /// Terminal contributions by the level of the state that produced them.
    pub terminal_trace: Vec<(HierarchyValue, E)>,
}

/// Receives each frontier, with full keys sorted by byte order, just before it is expanded.
pub trait TmObserver<E> {
    fn frontier(&mut self, level: &HierarchyValue, entries: &[(StateKey, E)]);
}

/// Observer that ignores every frontier.
pub struct NoObserver;

impl<E> TmObserver<E> for NoObserver {
    fn frontier(&mut self, _level: &HierarchyValue, _entries: &[(StateKey, E)]) {}
}

/// Collects every frontier in processing order.
#[derive(Debug, Default)]
pub struct FrontierRecorder<E> {
    pub frontiers: Vec<(HierarchyValue, Vec<(StateKey, E)>)>,
}

impl<E: Clone> TmObserver<E> for FrontierRecorder<E> {
    fn frontier(&mut self, level: &HierarchyValue, entries: &[(StateKey, E)]) {
        self.frontiers.push((level.clone(), entries.to_vec()));
    }
}

/// Serializes frontier records as `(u32 LE key length, key bytes, value encoding)`, sorted
/// by key bytes.
pub fn encode_frontier<R: ValueRing>(ring: &R, entries: &[(StateKey, R::Elem)]) -> Vec<u8> {
    let mut sorted: Vec<&(StateKey, R::Elem)> = entries.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    for (k, v) in sorted {
        out.extend_from_slice(&(k.len() as u32).to_le_bytes());
        out.extend_from_slice(k.as_bytes());
        ring.encode(v, &mut out);
    }
    out
}

type Emitted<E> = Vec<(HierarchyValue, StateKey, E)>;

/// Expands one state into `children` and the terminal accumulator. Returns false when the
/// state was trimmed away.
#[allow(clippy::too_many_arguments)]
fn process_state<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    ring: &R,
    options: &TmOptions,
    level: &HierarchyValue,
    key: &StateKey,
    mut value: R::Elem,
    children: &mut Emitted<R::Elem>,
    terminal: &mut R::Elem,
    stats: &mut RunStats,
) -> Result<bool> {
    if options.trim {
        match problem.completion_bound(key) {
            Some(Bound::Infeasible) => {
                stats.trimmed_states += 1;
                return Ok(false);
            }
            Some(Bound::Finite(b)) => {
                value = ring.trim(&value, b);
                if ring.is_zero(&value) {
                    stats.trimmed_states += 1;
                    return Ok(false);
                }
            }
            None => {}
        }
    }
    if let Some(len) = ring.gf_length(&value) {
        *stats.gf_length_histogram.entry(len).or_insert(0) += 1;
    }
    stats.expansions += 1;
    for term in problem.expand(key)?.terms {
        match term.kind {
            TermKind::Terminal => {
                ring.add_assign(terminal, &ring.weigh(&value, term.scalar, &term.shift)?)?;
            }
            TermKind::Product => return Err(Error::ProductTerm { state: problem.describe(key) }),
            TermKind::Sum => {
                let child = &term.children[0];
                let h = problem.hierarchy(child);
                if h >= *level {
                    return Err(Error::MalformedState {
                        state: problem.describe(key),
                        reason: format!("child {} has hierarchy {h}, not below {level}", problem.describe(child)),
                    });
                }
                let v = ring.weigh(&value, term.scalar, &term.shift)?;
                if !ring.is_zero(&v) {
                    let stored = problem.strip_level(child);
                    children.push((h, stored, v));
                }
            }
        }
    }
    Ok(true)
}

fn sorted_entries<P: Problem + ?Sized, E: Clone>(
    problem: &P,
    level: &HierarchyValue,
    map: &HashMap<StateKey, E>,
) -> Vec<(StateKey, E)> {
    let mut v: Vec<(StateKey, E)> = map.iter().map(|(k, e)| (problem.restore_level(level, k), e.clone())).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Evaluates `f(root)` level by level with default options.
pub fn tm_evaluate<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
) -> Result<TmRun<R::Elem>> {
    tm_evaluate_observed(problem, root, ring, &TmOptions::default(), &mut NoObserver)
}

pub fn tm_evaluate_opts<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    options: &TmOptions,
) -> Result<TmRun<R::Elem>> {
    tm_evaluate_observed(problem, root, ring, options, &mut NoObserver)
}

pub fn tm_evaluate_observed<P: Problem + ?Sized, R: ValueRing, O: TmObserver<R::Elem>>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    options: &TmOptions,
    observer: &mut O,
) -> Result<TmRun<R::Elem>> {
    let mut buckets: BTreeMap<HierarchyValue, HashMap<StateKey, R::Elem>> = BTreeMap::new();
    buckets.entry(problem.hierarchy(root)).or_default().insert(problem.strip_level(root), ring.one());
    let mut pending_total = 1usize;
    let mut stats = RunStats::default();
    let mut total = ring.zero();
    let mut trace = Vec::new();
    let mut children = Vec::new();

    while let Some((level, frontier)) = buckets.pop_last() {
        pending_total -= frontier.len();
        stats.levels.push(LevelStats { level: level.0.clone(), states: frontier.len(), pending: pending_total });
        stats.peak_frontier_states = stats.peak_frontier_states.max(frontier.len());
        observer.frontier(&level, &sorted_entries(problem, &level, &frontier));

        let mut at_level = ring.zero();
        for (stored, value) in frontier.iter() {
            let key = problem.restore_level(&level, stored);
            children.clear();
            process_state(
                problem,
                ring,
                options,
                &level,
                &key,
                value.clone(),
                &mut children,
                &mut at_level,
                &mut stats,
            )?;
            for (h, k, v) in children.drain(..) {
                let bucket = buckets.entry(h).or_default();
                match bucket.get_mut(&k) {
                    Some(acc) => ring.add_assign(acc, &v)?,
                    None => {
                        bucket.insert(k, v);
                        pending_total += 1;
                        if pending_total + frontier.len() > options.state_limit {
                            return Err(Error::StateLimit { limit: options.state_limit });
                        }
                    }
                }
            }
        }
        stats.peak_live_states = stats.peak_live_states.max(frontier.len() + pending_total);
        drop(frontier);
        if !ring.is_zero(&at_level) {
            ring.add_assign(&mut total, &at_level)?;
            trace.push((level, at_level));
        }
    }
    Ok(TmRun { value: total, stats, terminal_trace: trace })
}

/// Frontier evaluation with series values truncated at `max_exponent`.
pub fn tm_evaluate_series<P: Problem + ?Sized, R: ValueRing + Clone>(
    problem: &P,
    root: &StateKey,
    base: &R,
    max_exponent: u32,
    options: &TmOptions,
) -> Result<TmRun<SparseGf<R::Elem>>> {
    if problem.variable_count() == 0 {
        return Err(Error::Config(format!("problem {} tracks no series variable", problem.name())));
    }
    let ring = SeriesRing::new(base.clone(), max_exponent);
    tm_evaluate_opts(problem, root, &ring, options)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupOptions {
    pub threads: usize,
    /// Randomizes the order in which groups are handed to workers.
    pub shuffle_seed: Option<u64>,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions { threads: 1, shuffle_seed: None }
    }
}

struct GroupOutput<E> {
    children: Emitted<E>,
    terminal: E,
    stats: RunStats,
}

type Slot<E> = Mutex<Option<Result<GroupOutput<E>>>>;
type Grouped<E> = BTreeMap<HierarchyValue, BTreeMap<u64, HashMap<StateKey, E>>>;

/// Like [`tm_evaluate`], but each level is split into groups by `partition`. Groups are
/// processed independently, possibly on several threads, and merged in ascending group
/// order. A child reached from two different groups is reported as an error.
pub fn tm_evaluate_grouped<P, R, F>(
    problem: &P,
    root: &StateKey,
    ring: &R,
    partition: F,
    options: &TmOptions,
    groups: &GroupOptions,
) -> Result<TmRun<R::Elem>>
where
    P: Problem + ?Sized,
    R: ValueRing,
    F: Fn(&StateKey) -> u64 + Sync,
{
    let threads = groups.threads.max(1);
    let mut rng = groups.shuffle_seed.map(rand::rngs::StdRng::seed_from_u64);
    let mut buckets: Grouped<R::Elem> = BTreeMap::new();
    // producer group of every pending state, for invariant checks
    let mut origin: HashMap<(HierarchyValue, StateKey), u64> = HashMap::new();
    buckets
        .entry(problem.hierarchy(root))
        .or_default()
        .entry(partition(root))
        .or_default()
        .insert(problem.strip_level(root), ring.one());
    let mut pending_total = 1usize;
    let mut stats = RunStats::default();
    let mut total = ring.zero();
    let mut trace = Vec::new();
    let mut digest = DefaultHasher::new();

    while let Some((level, level_groups)) = buckets.pop_last() {
        let size: usize = level_groups.values().map(|g| g.len()).sum();
        pending_total -= size;
        stats.levels.push(LevelStats { level: level.0.clone(), states: size, pending: pending_total });
        stats.peak_frontier_states = stats.peak_frontier_states.max(size);
        origin.retain(|(h, _), _| *h != level);

        let ids: Vec<u64> = level_groups.keys().copied().collect();
        let members: Vec<&HashMap<StateKey, R::Elem>> = level_groups.values().collect();
        let mut schedule: Vec<usize> = (0..ids.len()).collect();
        if let Some(rng) = rng.as_mut() {
            schedule.shuffle(rng);
        }
        let results: Vec<Slot<R::Elem>> = (0..ids.len()).map(|_| Mutex::new(None)).collect();
        let run_group = |gi: usize| -> Result<GroupOutput<R::Elem>> {
            let mut out = GroupOutput { children: Vec::new(), terminal: ring.zero(), stats: RunStats::default() };
            let mut entries: Vec<(&StateKey, &R::Elem)> = members[gi].iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            for (stored, value) in entries {
                let key = problem.restore_level(&level, stored);
                process_state(
                    problem,
                    ring,
                    options,
                    &level,
                    &key,
                    value.clone(),
                    &mut out.children,
                    &mut out.terminal,
                    &mut out.stats,
                )?;
            }
            Ok(out)
        };
        if threads == 1 || ids.len() == 1 {
            for &gi in &schedule {
                *results[gi].lock().unwrap() = Some(run_group(gi));
            }
        } else {
            let next = AtomicUsize::new(0);
            std::thread::scope(|scope| {
                for _ in 0..threads.min(ids.len()) {
                    scope.spawn(|| loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&gi) = schedule.get(i) else { break };
                        *results[gi].lock().unwrap() = Some(run_group(gi));
                    });
                }
            });
        }

        // deterministic merge in ascending group order
        let mut at_level = ring.zero();
        for (gi, cell) in results.into_iter().enumerate() {
            let out = cell.into_inner().unwrap().expect("every group is scheduled")?;
            let group = ids[gi];
            stats.groups_processed += 1;
            stats.expansions += out.stats.expansions;
            stats.trimmed_states += out.stats.trimmed_states;
            for (len, n) in out.stats.gf_length_histogram {
                *stats.gf_length_histogram.entry(len).or_insert(0) += n;
            }
            ring.add_assign(&mut at_level, &out.terminal)?;

            let mut merged: BTreeMap<(HierarchyValue, StateKey), R::Elem> = BTreeMap::new();
            for (h, k, v) in out.children {
                match merged.get_mut(&(h.clone(), k.clone())) {
                    Some(acc) => ring.add_assign(acc, &v)?,
                    None => {
                        merged.insert((h, k), v);
                    }
                }
            }
            let mut records = Vec::with_capacity(merged.len());
            for ((h, k), v) in merged {
                let full = problem.restore_level(&h, &k);
                if let Some(&first) = origin.get(&(h.clone(), k.clone())) {
                    if first != group {
                        return Err(Error::GroupInvariant { state: problem.describe(&full), first, second: group });
                    }
                }
                origin.insert((h.clone(), k.clone()), group);
                let child_group = partition(&full);
                let bucket = buckets.entry(h).or_default().entry(child_group).or_default();
                records.push((full, v.clone()));
                match bucket.get_mut(&k) {
                    Some(acc) => ring.add_assign(acc, &v)?,
                    None => {
                        bucket.insert(k, v);
                        pending_total += 1;
                        if pending_total + size > options.state_limit {
                            return Err(Error::StateLimit { limit: options.state_limit });
                        }
                    }
                }
            }
            digest.write_u64(group);
            digest.write(&encode_frontier(ring, &records));
        }
        stats.peak_live_states = stats.peak_live_states.max(size + pending_total);
        if !ring.is_zero(&at_level) {
            ring.add_assign(&mut total, &at_level)?;
            trace.push((level, at_level));
        }
    }
    stats.frontier_digest = digest.finish();
    Ok(TmRun { value: total, stats, terminal_trace: trace })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeakMemoryComparison {
    pub tm_peak_states: usize,
    pub tm_peak_frontier_states: usize,
    pub dp_cache_entries: usize,
}

/// Peak frontier memory of the TM engine next to the full DP cache size.
pub fn peak_memory_comparison<P: Problem + ?Sized, R: ValueRing>(
    problem: &P,
    root: &StateKey,
    ring: &R,
) -> Result<PeakMemoryComparison> {
    let tm = tm_evaluate(problem, root, ring)?;
    let dp = dp_evaluate(problem, root, ring, &CacheConfig::full())?;
    Ok(PeakMemoryComparison {
        tm_peak_states: tm.stats.peak_live_states,
        tm_peak_frontier_states: tm.stats.peak_frontier_states,
        dp_cache_entries: dp.stats.entries,
    })
}
