use serde::Serialize;

use super::boundary::LatticeSpec;
use super::lattice::{LatticeOptions, PolycubeLattice};
use super::trim::TrimRule;
use crate::dp::{dp_evaluate_opts, CacheConfig, DpOptions};
use crate::error::{Error, Result};
use crate::model::{Problem, DEFAULT_STATE_LIMIT};
use crate::tm::{tm_evaluate_grouped, tm_evaluate_opts, GroupOptions, RunStats, TmOptions};
use crate::value::ValueRing;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolycubeOptions {
    pub trim: Option<TrimRule>,
    pub reflect: bool,
    pub grouped: bool,
    pub track_surface: bool,
    pub threads: usize,
    pub shuffle_seed: Option<u64>,
    pub state_limit: usize,
}

impl Default for PolycubeOptions {
    fn default() -> Self {
        PolycubeOptions {
            trim: Some(TrimRule::Max),
            reflect: false,
            grouped: false,
            track_surface: false,
            threads: 1,
            shuffle_seed: None,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

impl PolycubeOptions {
    pub fn lattice_options(&self, min_height: u32) -> LatticeOptions {
        LatticeOptions {
            min_height,
            trim: self.trim,
            reflect: self.reflect,
            track_surface: self.track_surface,
            grouped: self.grouped,
        }
    }
}

/// Result of one lattice run.
#[derive(Clone, Debug)]
pub struct LatticeRun<E> {
    pub spec: LatticeSpec,
    /// Series of the objects of each exact height, in increasing height.
    pub per_height: Vec<(u32, E)>,
    pub stats: RunStats,
}

/// Runs the frontier engine over one lattice. `ring` carries the truncation order.
pub fn enumerate_lattice<R: ValueRing>(
    spec: LatticeSpec,
    min_height: u32,
    options: &PolycubeOptions,
    ring: &R,
) -> Result<LatticeRun<R::Elem>> {
    let problem = PolycubeLattice::new(spec, options.lattice_options(min_height))?;
    let tm = TmOptions { state_limit: options.state_limit, trim: options.trim.is_some() };
    let root = problem.root();
    let run = if options.grouped {
        let groups = GroupOptions { threads: options.threads, shuffle_seed: options.shuffle_seed };
        tm_evaluate_grouped(&problem, &root, ring, |k| problem.group(k), &tm, &groups)?
    } else {
        tm_evaluate_opts(&problem, &root, ring, &tm)?
    };
    let mut per_height: Vec<(u32, R::Elem)> = Vec::new();
    for (level, v) in run.terminal_trace {
        let h = problem.terminal_height(&level);
        match per_height.iter_mut().find(|(x, _)| *x == h) {
            Some((_, acc)) => ring.add_assign(acc, &v)?,
            None => per_height.push((h, v)),
        }
    }
    per_height.sort_by_key(|(h, _)| *h);
    Ok(LatticeRun { spec, per_height, stats: run.stats })
}

/// Distinct orderings of the box dimensions.
pub fn box_permutations(w: u32, d: u32, h: u32) -> u64 {
    match (w == d, d == h, w == h) {
        (true, true, _) => 1,
        (false, false, false) => 6,
        _ => 3,
    }
}

/// Lattices needed for sizes up to `max_n`: one per `w <= d`, tall enough for every box
/// `w x d x h` with `d <= h` and `w + d + h <= max_n + 2`.
pub fn lattice_schedule(max_n: u32) -> Vec<LatticeSpec> {
    let mut out = Vec::new();
    for w in 1..=max_n {
        for d in w..=max_n {
            let h = (max_n + 2).saturating_sub(w + d);
            if h >= d && w * d <= 64 {
                out.push(LatticeSpec { w, d, h });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AssemblyEngine {
    /// One frontier run per lattice, split by completion height.
    Tm,
    /// One memoized run per box, with the lattice height equal to the box height.
    Dp { probability: f64 },
}

/// Per-lattice record, for dumps and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeRecord {
    pub lattice: [u32; 3],
    /// `(height, multiplicity, series)` per contributing box.
    pub boxes: Vec<(u32, u64, String)>,
    pub expansions: u64,
    pub peak_live_states: usize,
    pub trimmed_states: u64,
}

#[derive(Clone, Debug)]
pub struct Assembly<E> {
    pub total: E,
    pub lattices: Vec<LatticeRecord>,
    pub expansions: u64,
    pub peak_live_states: usize,
    pub gf_length_histogram: std::collections::BTreeMap<usize, u64>,
}

/// Total fixed polycubes by volume up to `max_n`, summed over bounding boxes.
pub fn assemble_counts<R: ValueRing>(
    max_n: u32,
    options: &PolycubeOptions,
    ring: &R,
    engine: AssemblyEngine,
) -> Result<Assembly<R::Elem>> {
    if max_n == 0 {
        return Err(Error::Config("max-n must be at least 1".into()));
    }
    let mut out = Assembly {
        total: ring.zero(),
        lattices: Vec::new(),
        expansions: 0,
        peak_live_states: 0,
        gf_length_histogram: Default::default(),
    };
    for spec in lattice_schedule(max_n) {
        match engine {
            AssemblyEngine::Tm => {
                let run = enumerate_lattice(spec, spec.d, options, ring)?;
                let mut record = LatticeRecord {
                    lattice: [spec.w, spec.d, spec.h],
                    boxes: Vec::new(),
                    expansions: run.stats.expansions,
                    peak_live_states: run.stats.peak_live_states,
                    trimmed_states: run.stats.trimmed_states,
                };
                for (h, v) in &run.per_height {
                    let m = box_permutations(spec.w, spec.d, *h);
                    ring.add_assign(&mut out.total, &ring.scalar_mul(v, m)?)?;
                    record.boxes.push((*h, m, ring.render(v)));
                }
                out.expansions += run.stats.expansions;
                out.peak_live_states = out.peak_live_states.max(run.stats.peak_live_states);
                for (len, n) in run.stats.gf_length_histogram {
                    *out.gf_length_histogram.entry(len).or_insert(0) += n;
                }
                out.lattices.push(record);
            }
            AssemblyEngine::Dp { probability } => {
                let config = CacheConfig::with_probability(probability)?;
                let caps = DpOptions { max_entries: options.state_limit, ..Default::default() };
                for h in spec.d..=spec.h {
                    let exact = LatticeSpec::new(spec.w, spec.d, h)?;
                    let problem = PolycubeLattice::new(exact, options.lattice_options(h))?;
                    let run = dp_evaluate_opts(&problem, &problem.root(), ring, &config, &caps)?;
                    let m = box_permutations(spec.w, spec.d, h);
                    ring.add_assign(&mut out.total, &ring.scalar_mul(&run.value, m)?)?;
                    out.expansions += run.stats.calls;
                    out.peak_live_states = out.peak_live_states.max(run.stats.entries);
                    out.lattices.push(LatticeRecord {
                        lattice: [spec.w, spec.d, h],
                        boxes: vec![(h, m, ring.render(&run.value))],
                        expansions: run.stats.calls,
                        peak_live_states: run.stats.entries,
                        trimmed_states: 0,
                    });
                }
            }
        }
    }
    Ok(out)
}
