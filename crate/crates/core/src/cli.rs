//! Command-line front end: `enumerate`, `compare`, `stats` and `audit`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dp::{dp_evaluate_opts, CacheConfig, DpOptions};
use crate::error::Error;
use crate::model::{audit_hierarchy, cleanliness_audit, Problem, Trimmed, DEFAULT_STATE_LIMIT};
use crate::polycube::{
    assemble_counts, enumerate_lattice, lattice_schedule, AssemblyEngine, LatticeRecord, LatticeSpec, PolycubeLattice,
    PolycubeOptions, TrimRule,
};
use crate::problems::{Brackets, DirectedAnimals, FactorToy, Formulation};
use crate::tm::{tm_evaluate_grouped, tm_evaluate_opts, GroupOptions, TmOptions};
use crate::value::{
    crt_check, crt_reconstruct, BigRing, CheckedI64, Gf2Ring, ModRing, ModulusSet, MomentRing, SeriesRing, ValueRing,
};

#[derive(Debug, Parser)]
#[command(name = "latenum", version, about = "Enumerate combinatorial objects by DP or transfer-matrix frontiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = EngineKind::Tm)]
    pub engine: EngineKind,
    /// `int64`, `bigint`, or `mod:<m1,m2,...>`.
    #[arg(long, global = true, default_value = "int64")]
    pub ring: String,
    /// Probability of storing a computed DP value.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub cache_prob: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, env = "LATENUM_STATE_LIMIT", default_value_t = DEFAULT_STATE_LIMIT)]
    pub state_limit: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a problem and print its count or series.
    Enumerate(ProblemArgs),
    /// Run both engines and compare values and memory.
    Compare(ProblemArgs),
    /// Print series-length, bit-length and per-level histograms.
    Stats(ProblemArgs),
    /// Check the hierarchy and list reachable dead states.
    Audit(ProblemArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Dp,
    Tm,
    TmGrouped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        self == Toggle::On
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProblemArgs {
    /// brackets, brackets-unclean, diran-a, diran-b, factor-toy or polycube.
    pub problem: String,
    /// Size: pairs for brackets, sites for directed animals, first segment for factor-toy.
    #[arg(long)]
    pub n: Option<u32>,
    /// Second segment for factor-toy.
    #[arg(long)]
    pub m: Option<u32>,
    /// Largest polycube volume.
    #[arg(long)]
    pub max_n: Option<u32>,
    /// Run one polycube lattice, `WxDxH`, instead of the full assembly.
    #[arg(long)]
    pub lattice: Option<String>,
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub trim: Toggle,
    /// Use the additive trimming rule instead of the default maximum rule.
    #[arg(long)]
    pub additive_trim: bool,
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub reflect: Toggle,
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub grouped: Toggle,
    /// Track surface area as a second variable.
    #[arg(long)]
    pub track_surface: bool,
    /// Track surface-area moments up to this order instead of the full second variable.
    #[arg(long)]
    pub moments: Option<usize>,
    /// Seed for shuffling the grouped schedule.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write per-lattice JSON records here.
    #[arg(long)]
    pub dump: Option<std::path::PathBuf>,
}

/// Failure classes, mapped to exit codes 2, 3 and 4.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("engine error: {0}")]
    Engine(Error),
    #[error("resource limit: {0}")]
    Limit(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(_) => 3,
            CliError::Limit(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::StateLimit { .. } | Error::OracleLimit { .. } => CliError::Limit(e),
            Error::Config(s) => CliError::Config(s),
            Error::InvalidModuli(_) => CliError::Config(e.to_string()),
            other => CliError::Engine(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Flattened numeric result. `dims` gives the row-major shape of `values`: `[]` for a count,
/// `[n + 1]` for a series, `[n + 1, 6n + 1]` for volume by surface area, `[m + 1, n + 1]`
/// for moments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueReport {
    pub layout: String,
    pub dims: Vec<usize>,
    pub values: Vec<String>,
    /// Mean surface area per volume, `M_1 / M_0`, for moment runs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub means: Vec<String>,
    /// Modular runs with three or more moduli: every value was confirmed by a redundant
    /// modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crt_verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub dp_value: Option<ValueReport>,
    pub tm_value: Option<ValueReport>,
    pub tm_error: Option<String>,
    pub equal: bool,
    pub dp_cache_entries: usize,
    pub dp_calls: u64,
    pub tm_peak_live_states: usize,
    pub tm_peak_frontier_states: usize,
    pub tm_expansions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub states: usize,
    pub edges: usize,
    pub violations: usize,
    pub ideal: bool,
    pub truncated: bool,
    pub clean: bool,
    pub unclean_count: usize,
    /// Descriptions of up to 50 dead states.
    pub unclean: Vec<String>,
}

/// Everything a command prints; JSON field order is the declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub problem: String,
    pub engine: String,
    pub ring: String,
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<ValueReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<serde_json::Value>,
    pub wall_time_us: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RingSpec {
    Int64,
    BigInt,
    Modular(ModulusSet),
}

impl RingSpec {
    fn parse(s: &str) -> CliResult<RingSpec> {
        match s {
            "int64" => Ok(RingSpec::Int64),
            "bigint" => Ok(RingSpec::BigInt),
            _ => match s.strip_prefix("mod:") {
                Some(list) => {
                    let moduli = list
                        .split(',')
                        .map(|m| m.trim().parse::<u64>().map_err(|_| CliError::Config(format!("bad modulus '{m}'"))))
                        .collect::<CliResult<Vec<u64>>>()?;
                    Ok(RingSpec::Modular(ModulusSet::new(moduli)?))
                }
                None => config_err(format!("unknown ring '{s}'; use int64, bigint or mod:<m1,m2,...>")),
            },
        }
    }
}

/// Base rings whose elements have an exact integer reading.
trait ExactRing: ValueRing + Clone {
    fn exact(&self, a: &Self::Elem) -> BigInt;
}

impl ExactRing for CheckedI64 {
    fn exact(&self, a: &i64) -> BigInt {
        BigInt::from(*a)
    }
}

impl ExactRing for BigRing {
    fn exact(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

impl ExactRing for ModRing {
    fn exact(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

enum Job {
    Scalar(Box<dyn Problem>),
    Polycube(PolyJob),
}

#[derive(Clone, Copy)]
struct PolyJob {
    max_n: u32,
    lattice: Option<LatticeSpec>,
    options: PolycubeOptions,
    vars: PolyVars,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PolyVars {
    Volume,
    Surface,
    Moments(usize),
}

fn size(args: &ProblemArgs, what: &str) -> CliResult<u32> {
    args.n.ok_or_else(|| CliError::Config(format!("{} needs --n ({what})", args.problem)))
}

fn pairs(v: u32) -> CliResult<u16> {
    u16::try_from(v).map_err(|_| CliError::Config(format!("size {v} is too large")))
}

fn build_job(args: &ProblemArgs, global: &GlobalArgs) -> CliResult<Job> {
    let scalar = |p: Box<dyn Problem>| Ok(Job::Scalar(p));
    match args.problem.as_str() {
        "brackets" => scalar(Box::new(Brackets::new(pairs(size(args, "pairs")?)?))),
        "brackets-unclean" => scalar(Box::new(Brackets::unclean(pairs(size(args, "pairs")?)?))),
        "diran-a" => scalar(Box::new(DirectedAnimals::new(size(args, "sites")?, Formulation::A)?)),
        "diran-b" => scalar(Box::new(DirectedAnimals::new(size(args, "sites")?, Formulation::B)?)),
        "factor-toy" => {
            let a = pairs(size(args, "first segment")?)?;
            let b = pairs(args.m.unwrap_or(a as u32))?;
            scalar(Box::new(FactorToy::new(a, b)))
        }
        "polycube" => {
            let lattice = args.lattice.as_deref().map(LatticeSpec::parse).transpose()?;
            let max_n = match (args.max_n, lattice) {
                (Some(n), _) => n,
                (None, Some(l)) => l.cells(),
                (None, None) => return config_err("polycube needs --max-n or --lattice"),
            };
            if max_n == 0 {
                return config_err("--max-n must be at least 1");
            }
            let vars = match (args.moments, args.track_surface) {
                (Some(m), _) => PolyVars::Moments(m),
                (None, true) => PolyVars::Surface,
                (None, false) => PolyVars::Volume,
            };
            let trim = match (args.trim.on(), args.additive_trim) {
                (false, _) => None,
                (true, false) => Some(TrimRule::Max),
                (true, true) => Some(TrimRule::Additive),
            };
            let grouped = args.grouped.on() || global.engine == EngineKind::TmGrouped;
            let options = PolycubeOptions {
                trim,
                reflect: args.reflect.on(),
                grouped,
                track_surface: vars != PolyVars::Volume,
                threads: global.threads,
                shuffle_seed: args.seed,
                state_limit: global.state_limit,
            };
            if options.reflect && options.grouped {
                return config_err("--reflect on cannot be combined with grouped execution");
            }
            Ok(Job::Polycube(PolyJob { max_n, lattice, options, vars }))
        }
        other => config_err(format!(
            "unknown problem '{other}'; expected brackets, brackets-unclean, diran-a, diran-b, factor-toy or polycube"
        )),
    }
}

/// Engine output, flattened to exact integers.
struct Outcome {
    values: Vec<BigInt>,
    dims: Vec<usize>,
    layout: &'static str,
    stats: serde_json::Value,
    lattices: Vec<LatticeRecord>,
    /// `(entries or peak live states, calls or expansions, peak frontier)`.
    memory: (usize, u64, usize),
    crt_verified: Option<bool>,
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable stats")
}

fn run_scalar<R: ExactRing>(
    problem: &dyn Problem,
    ring: &R,
    engine: EngineKind,
    g: &GlobalArgs,
    seed: Option<u64>,
) -> CliResult<Outcome> {
    let root = problem.root();
    let tm = TmOptions { state_limit: g.state_limit, trim: false };
    let (value, stats, memory) = match engine {
        EngineKind::Dp => {
            let config = CacheConfig::with_probability(g.cache_prob)?;
            let caps = DpOptions { max_entries: g.state_limit, ..Default::default() };
            let run = dp_evaluate_opts(problem, &root, ring, &config, &caps)?;
            let memory = (run.stats.entries, run.stats.calls, 0);
            (run.value, to_json(&run.stats), memory)
        }
        EngineKind::Tm => {
            let run = tm_evaluate_opts(problem, &root, ring, &tm)?;
            let memory = (run.stats.peak_live_states, run.stats.expansions, run.stats.peak_frontier_states);
            (run.value, to_json(&run.stats), memory)
        }
        EngineKind::TmGrouped => {
            // one group: these problems have no occupancy pattern to split on
            let groups = GroupOptions { threads: g.threads, shuffle_seed: seed };
            let run = tm_evaluate_grouped(problem, &root, ring, |_| 0, &tm, &groups)?;
            let memory = (run.stats.peak_live_states, run.stats.expansions, run.stats.peak_frontier_states);
            (run.value, to_json(&run.stats), memory)
        }
    };
    Ok(Outcome {
        values: vec![ring.exact(&value)],
        dims: vec![],
        layout: "count",
        stats,
        lattices: vec![],
        memory,
        crt_verified: None,
    })
}

/// Flattened values, stats, per-lattice records, and (peak live states, expansions, lattices).
type PolyOutcome = (Vec<BigInt>, serde_json::Value, Vec<LatticeRecord>, (usize, u64, usize));

/// Runs a polycube job over `ring`, then flattens each value with `flatten`.
fn run_poly_in<R: ValueRing>(
    job: &PolyJob,
    ring: &R,
    engine: EngineKind,
    cache_prob: f64,
    flatten: impl Fn(&R::Elem) -> Vec<BigInt>,
) -> CliResult<PolyOutcome> {
    if let Some(spec) = job.lattice {
        if engine == EngineKind::Dp {
            return config_err("single-lattice runs use the tm engine");
        }
        let run = enumerate_lattice(spec, 1, &job.options, ring)?;
        let mut total = ring.zero();
        for (_, v) in &run.per_height {
            ring.add_assign(&mut total, v)?;
        }
        let record = LatticeRecord {
            lattice: [spec.w, spec.d, spec.h],
            boxes: run.per_height.iter().map(|(h, v)| (*h, 1, ring.render(v))).collect(),
            expansions: run.stats.expansions,
            peak_live_states: run.stats.peak_live_states,
            trimmed_states: run.stats.trimmed_states,
        };
        let memory = (run.stats.peak_live_states, run.stats.expansions, run.stats.peak_frontier_states);
        return Ok((flatten(&total), to_json(&run.stats), vec![record], memory));
    }
    let assembly_engine = match engine {
        EngineKind::Dp => AssemblyEngine::Dp { probability: cache_prob },
        _ => AssemblyEngine::Tm,
    };
    let a = assemble_counts(job.max_n, &job.options, ring, assembly_engine)?;
    let stats = serde_json::json!({
        "expansions": a.expansions,
        "gf_length_histogram": a.gf_length_histogram,
        "lattices": a.lattices.len(),
        "peak_live_states": a.peak_live_states,
    });
    let memory = (a.peak_live_states, a.expansions, 0);
    Ok((flatten(&a.total), stats, a.lattices, memory))
}

fn run_poly<B: ExactRing>(job: &PolyJob, base: &B, engine: EngineKind, cache_prob: f64) -> CliResult<Outcome> {
    let n = job.max_n;
    let len = n as usize + 1;
    let (layout, dims) = match job.vars {
        PolyVars::Volume => ("series", vec![len]),
        PolyVars::Surface => ("surface", vec![len, 6 * n as usize + 1]),
        PolyVars::Moments(m) => ("moments", vec![m + 1, len]),
    };
    let (values, stats, lattices, memory) = match job.vars {
        PolyVars::Volume => run_poly_in(job, &SeriesRing::new(base.clone(), n), engine, cache_prob, |g| {
            (0..=n).map(|i| base.exact(&g.coeff(base, i))).collect()
        })?,
        PolyVars::Surface => run_poly_in(job, &Gf2Ring::new(base.clone(), n), engine, cache_prob, |g| {
            (0..=n)
                .flat_map(|i| (0..=6 * n).map(move |a| (i, a)))
                .map(|(i, a)| base.exact(&g.coeff(base, i, a)))
                .collect()
        })?,
        PolyVars::Moments(m) => run_poly_in(job, &MomentRing::new(base.clone(), m, n), engine, cache_prob, |g| {
            (0..=m)
                .flat_map(|k| (0..=n).map(move |i| (k, i)))
                .map(|(k, i)| base.exact(&g.moment(k).coeff(base, i)))
                .collect()
        })?,
    };
    Ok(Outcome { values, dims, layout, stats, lattices, memory, crt_verified: None })
}

fn run_job<B: ExactRing>(
    job: &Job,
    base: &B,
    engine: EngineKind,
    g: &GlobalArgs,
    seed: Option<u64>,
) -> CliResult<Outcome> {
    match job {
        Job::Scalar(p) => run_scalar(p.as_ref(), base, engine, g, seed),
        Job::Polycube(pj) => run_poly(pj, base, engine, g.cache_prob),
    }
}

/// Runs under the requested ring; modular runs go once per modulus and are joined by CRT.
fn evaluate(job: &Job, ring: &RingSpec, engine: EngineKind, g: &GlobalArgs, seed: Option<u64>) -> CliResult<Outcome> {
    match ring {
        RingSpec::Int64 => run_job(job, &CheckedI64, engine, g, seed),
        RingSpec::BigInt => run_job(job, &BigRing, engine, g, seed),
        RingSpec::Modular(set) => {
            let mut runs = Vec::new();
            for &m in set.moduli() {
                runs.push(run_job(job, &ModRing::new(m)?, engine, g, seed)?);
            }
            let mut values = Vec::with_capacity(runs[0].values.len());
            let mut verified = set.len() >= 3;
            for i in 0..runs[0].values.len() {
                let residues: Vec<u64> = runs.iter().map(|r| r.values[i].to_u64().unwrap_or(0)).collect();
                values.push(BigInt::from(crt_reconstruct(&residues, set)?));
                verified = verified && crt_check(&residues, set).is_ok();
            }
            let mut first = runs.swap_remove(0);
            first.values = values;
            first.crt_verified = (set.len() >= 3).then_some(verified);
            Ok(first)
        }
    }
}

fn value_report(o: &Outcome) -> ValueReport {
    let mut means = Vec::new();
    if o.layout == "moments" && o.dims[0] >= 2 {
        let len = o.dims[1];
        for i in 1..len {
            let (m0, m1) = (&o.values[i], &o.values[len + i]);
            if !m0.is_zero() {
                means.push(format!("{i}:{}", BigRational::new(m1.clone(), m0.clone())));
            }
        }
    }
    ValueReport {
        layout: o.layout.to_string(),
        dims: o.dims.clone(),
        values: o.values.iter().map(|v| v.to_string()).collect(),
        means,
        crt_verified: o.crt_verified,
    }
}

fn engine_name(e: EngineKind) -> &'static str {
    match e {
        EngineKind::Dp => "dp",
        EngineKind::Tm => "tm",
        EngineKind::TmGrouped => "tm-grouped",
    }
}

fn params(args: &ProblemArgs, g: &GlobalArgs) -> BTreeMap<String, String> {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    if let Some(n) = args.n {
        put("n", n.to_string());
    }
    if let Some(m) = args.m {
        put("m", m.to_string());
    }
    if let Some(n) = args.max_n {
        put("max_n", n.to_string());
    }
    if let Some(l) = &args.lattice {
        put("lattice", l.clone());
    }
    if args.problem == "polycube" {
        put(
            "trim",
            if args.trim.on() {
                if args.additive_trim {
                    "additive"
                } else {
                    "on"
                }
            } else {
                "off"
            }
            .into(),
        );
        put("reflect", format!("{:?}", args.reflect).to_lowercase());
        put("grouped", format!("{:?}", args.grouped).to_lowercase());
        put("track_surface", args.track_surface.to_string());
        if let Some(m) = args.moments {
            put("moments", m.to_string());
        }
    }
    if let Some(s) = args.seed {
        put("seed", s.to_string());
    }
    put("cache_prob", g.cache_prob.to_string());
    put("threads", g.threads.to_string());
    put("state_limit", g.state_limit.to_string());
    p
}

fn write_dump(path: &std::path::Path, job: &PolyJob, lattices: &[LatticeRecord]) -> CliResult<()> {
    let schedule: Vec<[u32; 3]> = match job.lattice {
        Some(l) => vec![[l.w, l.d, l.h]],
        None => lattice_schedule(job.max_n).iter().map(|s| [s.w, s.d, s.h]).collect(),
    };
    let mut out = String::new();
    writeln!(out, "{}", serde_json::json!({ "max_n": job.max_n, "schedule": schedule })).unwrap();
    for r in lattices {
        writeln!(out, "{}", serde_json::to_string(r).expect("serializable record")).unwrap();
    }
    std::fs::write(path, out).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let g = &cli.global;
    let (name, args) = match &cli.command {
        Command::Enumerate(a) => ("enumerate", a),
        Command::Compare(a) => ("compare", a),
        Command::Stats(a) => ("stats", a),
        Command::Audit(a) => ("audit", a),
    };
    if g.threads == 0 {
        return config_err("--threads must be at least 1");
    }
    if g.state_limit == 0 {
        return config_err("--state-limit must be positive");
    }
    CacheConfig::with_probability(g.cache_prob)?;
    let ring = RingSpec::parse(&g.ring)?;
    let job = build_job(args, g)?;
    let start = Instant::now();
    let mut report = Report {
        command: name.to_string(),
        problem: args.problem.clone(),
        engine: engine_name(g.engine).to_string(),
        ring: g.ring.clone(),
        params: params(args, g),
        value: None,
        compare: None,
        audit: None,
        stats: None,
        wall_time_us: 0,
    };
    match &cli.command {
        Command::Enumerate(_) | Command::Stats(_) => {
            let o = evaluate(&job, &ring, g.engine, g, args.seed)?;
            if let (Some(path), Job::Polycube(pj)) = (&args.dump, &job) {
                write_dump(path, pj, &o.lattices)?;
            }
            report.value = Some(value_report(&o));
            if name == "stats" {
                report.stats = Some(o.stats);
            }
        }
        Command::Compare(_) => {
            let dp = evaluate(&job, &ring, EngineKind::Dp, g, args.seed)?;
            let tm = evaluate(&job, &ring, EngineKind::Tm, g, args.seed);
            let dp_value = value_report(&dp);
            report.compare = Some(match tm {
                Ok(tm) => {
                    let tm_value = value_report(&tm);
                    CompareReport {
                        equal: dp_value.values == tm_value.values,
                        dp_value: Some(dp_value),
                        tm_value: Some(tm_value),
                        tm_error: None,
                        dp_cache_entries: dp.memory.0,
                        dp_calls: dp.memory.1,
                        tm_peak_live_states: tm.memory.0,
                        tm_expansions: tm.memory.1,
                        tm_peak_frontier_states: tm.memory.2,
                    }
                }
                Err(CliError::Engine(e)) => CompareReport {
                    dp_value: Some(dp_value),
                    tm_value: None,
                    tm_error: Some(e.to_string()),
                    equal: false,
                    dp_cache_entries: dp.memory.0,
                    dp_calls: dp.memory.1,
                    tm_peak_live_states: 0,
                    tm_peak_frontier_states: 0,
                    tm_expansions: 0,
                },
                Err(other) => return Err(other),
            });
        }
        Command::Audit(_) => {
            report.audit = Some(audit(&job, &ring, g.state_limit)?);
        }
    }
    report.wall_time_us = start.elapsed().as_micros() as u64;
    Ok(report)
}

fn audit_with<P: Problem + ?Sized, R: ValueRing>(p: &P, ring: &R, limit: usize) -> CliResult<AuditReport> {
    let root = p.root();
    let h = audit_hierarchy(p, &root, limit)?;
    let zeros = cleanliness_audit(p, &root, ring, limit)?;
    Ok(AuditReport {
        states: h.states,
        edges: h.edges,
        violations: h.violations.len(),
        ideal: h.ideal,
        truncated: h.truncated,
        clean: zeros.is_empty(),
        unclean_count: zeros.len(),
        unclean: zeros.iter().take(50).map(|k| p.describe(k)).collect(),
    })
}

fn audit(job: &Job, ring: &RingSpec, limit: usize) -> CliResult<AuditReport> {
    // exact zero tests only need one modulus when the values are small
    match (job, ring) {
        (Job::Scalar(p), RingSpec::BigInt) => audit_with(p.as_ref(), &BigRing, limit),
        (Job::Scalar(p), _) => audit_with(p.as_ref(), &CheckedI64, limit),
        (Job::Polycube(pj), _) => {
            let spec = pj.lattice.unwrap_or(LatticeSpec { w: 2, d: 2, h: 2 });
            let options = pj.options.lattice_options(1);
            let lattice = PolycubeLattice::new(spec, options)?;
            let ring = SeriesRing::new(BigRing, pj.max_n);
            if options.trim.is_some() {
                audit_with(&Trimmed(&lattice), &ring, limit)
            } else {
                audit_with(&lattice, &ring, limit)
            }
        }
    }
}

fn bars(out: &mut String, title: &str, rows: &[(String, u64)]) {
    if rows.is_empty() {
        return;
    }
    let widest = rows.iter().map(|r| r.1).max().unwrap_or(0).max(1);
    let _ = writeln!(out, "{title}:");
    for (k, v) in rows {
        let len = ((*v as f64 / widest as f64) * 40.0).ceil() as usize;
        let _ = writeln!(out, "  {k:>8} {v:>12} {}", "#".repeat(len));
    }
}

fn histogram_rows(v: &serde_json::Value) -> Vec<(String, u64)> {
    let mut rows: Vec<(String, u64)> = v
        .as_object()
        .map(|m| m.iter().map(|(k, c)| (k.clone(), c.as_u64().unwrap_or(0))).collect())
        .unwrap_or_default();
    rows.sort_by_key(|(k, _)| k.parse::<u64>().unwrap_or(u64::MAX));
    rows
}

fn render_value(out: &mut String, v: &ValueReport) {
    match v.crt_verified {
        Some(true) => out.push_str("crt: every value confirmed by a redundant modulus\n"),
        Some(false) => out.push_str("crt: not verified, some value needs every modulus (or a residue is corrupt)\n"),
        None => {}
    }
    match v.layout.as_str() {
        "count" => {
            let _ = writeln!(out, "count: {}", v.values[0]);
        }
        "series" => {
            let _ = writeln!(out, "series: {}", v.values.iter().skip(1).cloned().collect::<Vec<_>>().join(", "));
        }
        "surface" => {
            let cols = v.dims[1];
            for (n, row) in v.values.chunks(cols).enumerate().skip(1) {
                let cells: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.as_str() != "0")
                    .map(|(a, c)| format!("{a}:{c}"))
                    .collect();
                let _ = writeln!(out, "n={n} area:count {}", cells.join(" "));
            }
        }
        _ => {
            let cols = v.dims[1];
            for (k, row) in v.values.chunks(cols).enumerate() {
                let _ = writeln!(out, "M{k}: {}", row.iter().skip(1).cloned().collect::<Vec<_>>().join(", "));
            }
            if !v.means.is_empty() {
                let _ = writeln!(out, "mean surface: {}", v.means.join(" "));
            }
        }
    }
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} (engine {}, ring {})", r.command, r.problem, r.engine, r.ring);
    if let Some(v) = &r.value {
        render_value(&mut out, v);
    }
    if let Some(c) = &r.compare {
        if let Some(v) = &c.dp_value {
            out.push_str("dp ");
            render_value(&mut out, v);
        }
        match (&c.tm_value, &c.tm_error) {
            (Some(v), _) => {
                out.push_str("tm ");
                render_value(&mut out, v);
            }
            (None, Some(e)) => {
                let _ = writeln!(out, "tm error: {e}");
            }
            _ => {}
        }
        let _ = writeln!(out, "equal: {}", c.equal);
        let _ = writeln!(out, "dp cache entries: {}  dp calls: {}", c.dp_cache_entries, c.dp_calls);
        let _ = writeln!(
            out,
            "tm peak live states: {}  tm peak frontier: {}  tm expansions: {}",
            c.tm_peak_live_states, c.tm_peak_frontier_states, c.tm_expansions
        );
    }
    if let Some(a) = &r.audit {
        let _ = writeln!(out, "states: {}  edges: {}  truncated: {}", a.states, a.edges, a.truncated);
        let _ = writeln!(out, "hierarchy violations: {}  ideal: {}", a.violations, a.ideal);
        let _ = writeln!(out, "clean: {}  dead states: {}", a.clean, a.unclean_count);
        for s in &a.unclean {
            let _ = writeln!(out, "  {s}");
        }
    }
    if let Some(s) = &r.stats {
        if let Some(h) = s.get("gf_length_histogram") {
            bars(&mut out, "series length per expanded state", &histogram_rows(h));
        }
        if let Some(h) = s.get("bit_length_histogram") {
            bars(&mut out, "value bit length per cache entry", &histogram_rows(h));
        }
        if let Some(levels) = s.get("levels").and_then(|l| l.as_array()) {
            let rows: Vec<(String, u64)> = levels
                .iter()
                .map(|l| {
                    let level: Vec<String> =
                        l["level"].as_array().into_iter().flatten().map(|x| x.to_string()).collect();
                    (level.join("."), l["states"].as_u64().unwrap_or(0))
                })
                .collect();
            bars(&mut out, "states per level", &rows);
        }
        for key in ["expansions", "peak_live_states", "peak_frontier_states", "trimmed_states", "entries", "calls"] {
            if let Some(v) = s.get(key) {
                let _ = writeln!(out, "{key}: {v}");
            }
        }
    }
    let _ = writeln!(out, "wall time: {} us", r.wall_time_us);
    out
}

/// Parses `args`, runs the command and prints the report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            match cli.global.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable report")),
                Format::Text => print!("{}", render_text(&report)),
            }
            0
        }
        Err(e) => {
            eprintln!("latenum: {e}");
            e.exit_code()
        }
    }
}
