//! End-to-end checks of counts, engine agreement, trimming, caching, residues, moments and grouping.

use std::time::{Duration, Instant};

use latenum::dp::{dp_evaluate, CacheConfig};
use latenum::model::{reachable_state_count, Bound, Problem};
use latenum::polycube::{
    assemble_counts, enumerate_lattice, AssemblyEngine, LatticeOptions, LatticeSpec, PolycubeLattice, PolycubeOptions,
    TrimRule,
};
use latenum::problems::oracles::{brackets_oracle, diran_oracle, polycube_census};
use latenum::problems::{Brackets, DirectedAnimals, Formulation};
use latenum::tm::{peak_memory_comparison, tm_evaluate, tm_evaluate_observed, FrontierRecorder, TmOptions};
use latenum::value::{
    bridge_from_irreducible, crt_check, crt_reconstruct, gf_truncate, irreducible_from_bridge, moment_mean, BigRing,
    CheckedI64, Gf2Ring, ModRing, ModulusSet, MomentRing, SeriesRing, SparseGf, ValueRing,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};

mod common;

fn diran(n: u32, f: Formulation) -> DirectedAnimals {
    DirectedAnimals::new(n, f).unwrap()
}

fn dp_count<P: Problem, R: ValueRing>(p: &P, ring: &R) -> R::Elem {
    dp_evaluate(p, &p.root(), ring, &CacheConfig::full()).unwrap().value
}

fn tm_count<P: Problem, R: ValueRing>(p: &P, ring: &R) -> R::Elem {
    tm_evaluate(p, &p.root(), ring).unwrap().value
}

fn series_coeffs(g: &SparseGf<i64>, n: u32) -> Vec<i64> {
    (0..=n).map(|i| g.coeff(&CheckedI64, i)).collect()
}

#[test]
fn directed_animals() {
    let start = Instant::now();
    for f in [Formulation::A, Formulation::B] {
        for (n, want) in [(1, 1), (2, 2), (3, 5), (4, 13)] {
            assert_eq!(dp_count(&diran(n, f), &CheckedI64), want);
            assert_eq!(tm_count(&diran(n, f), &CheckedI64), want);
        }
        for n in 1..=12 {
            let want = diran_oracle(n).unwrap() as i64;
            assert_eq!(dp_count(&diran(n, f), &CheckedI64), want, "n={n}");
            assert_eq!(tm_count(&diran(n, f), &CheckedI64), want, "n={n}");
        }
    }
    assert!(start.elapsed() < Duration::from_secs(1));
}

#[test]
fn frontier_table_replay() {
    let p = diran(4, Formulation::B);
    let mut rec = FrontierRecorder::default();
    let run = tm_evaluate_observed(&p, &p.root(), &CheckedI64, &TmOptions::default(), &mut rec).unwrap();
    let rows: Vec<Vec<i64>> = rec
        .frontiers
        .iter()
        .map(|(_, entries)| {
            let mut m: Vec<i64> = entries.iter().map(|(_, v)| *v).collect();
            m.sort();
            m
        })
        .collect();
    assert_eq!(rows, vec![vec![1], vec![1], vec![1, 1], vec![1, 2, 2], vec![1, 2, 5, 5]]);
    assert_eq!(run.value, 13);
    // one coalesced state per entry of the table
    assert_eq!(reachable_state_count(&p, &p.root(), 1000).unwrap(), 11);
}

#[test]
fn brackets() {
    let start = Instant::now();
    for n in 0..=12u16 {
        let want = brackets_oracle(n as u32).unwrap() as i64;
        assert_eq!(dp_count(&Brackets::new(n), &CheckedI64), want, "n={n}");
    }
    let b = Brackets::new(10);
    let run = dp_evaluate(&b, &b.root(), &CheckedI64, &CacheConfig::full()).unwrap();
    assert_eq!(run.value, 16796);
    assert_eq!(run.stats.entries, 66);
    assert_eq!(reachable_state_count(&b, &b.root(), 1000).unwrap(), 66);
    assert!(start.elapsed() < Duration::from_secs(1));
}

#[test]
fn engine_equivalence() {
    for n in 0..=14u16 {
        for p in [Brackets::new(n), Brackets::unclean(n)] {
            assert_eq!(dp_count(&p, &CheckedI64), tm_count(&p, &CheckedI64), "{} n={n}", p.name());
        }
    }
    for f in [Formulation::A, Formulation::B] {
        for n in 1..=16 {
            let p = diran(n, f);
            assert_eq!(dp_count(&p, &CheckedI64), tm_count(&p, &CheckedI64), "{} n={n}", p.name());
        }
    }
    for n in 1..=5u32 {
        let spec = LatticeSpec::new(2, 2, n).unwrap();
        let opts = LatticeOptions { min_height: 1, trim: None, reflect: false, track_surface: false, grouped: false };
        let p = PolycubeLattice::new(spec, opts).unwrap();
        let ring = SeriesRing::new(CheckedI64, spec.cells());
        assert_eq!(dp_count(&p, &ring), tm_count(&p, &ring));
    }
    let p = diran(20, Formulation::B);
    let m = peak_memory_comparison(&p, &p.root(), &CheckedI64).unwrap();
    assert!(m.tm_peak_states <= m.dp_cache_entries, "{m:?}");
}

#[test]
fn polycube_counts() {
    let start = Instant::now();
    let n = 8;
    let census = polycube_census(n).unwrap();
    assert_eq!(census.counts, [0, 1, 3, 15, 86, 534, 3481, 23502, 162913]);
    let a =
        assemble_counts(n, &PolycubeOptions::default(), &SeriesRing::new(CheckedI64, n), AssemblyEngine::Tm).unwrap();
    let want: Vec<i64> = census.counts.iter().map(|&c| c as i64).collect();
    assert_eq!(series_coeffs(&a.total, n), want);
    assert!(start.elapsed() < Duration::from_secs(300));
}

#[test]
fn trimming_soundness() {
    let mut checked = 0;
    for (w, d, h, min_height) in [(2, 2, 3, 2), (2, 2, 4, 3), (2, 3, 3, 2), (2, 3, 3, 3), (2, 3, 4, 4)] {
        let spec = LatticeSpec::new(w, d, h).unwrap();
        let opts = LatticeOptions { min_height, trim: None, reflect: false, track_surface: false, grouped: false };
        let lat = PolycubeLattice::new(spec, opts).unwrap();
        let run =
            dp_evaluate(&lat, &lat.root(), &SeriesRing::new(CheckedI64, spec.cells()), &CacheConfig::full()).unwrap();
        for (key, _) in run.cache.iter() {
            let b = lat.decode(key).unwrap();
            if b.color_count() > 3 || b.p == spec.cells() {
                continue;
            }
            let Some(best) = common::brute_completion(&b, &spec, min_height, 4) else { continue };
            match trim_bound(&b, &spec, min_height) {
                Bound::Finite(x) => assert!(x as usize <= best, "{}: bound {x} > {best}", b.render(&spec)),
                Bound::Infeasible => panic!("{} declared infeasible", b.render(&spec)),
            }
            checked += 1;
        }
    }
    assert!(checked > 500, "{checked}");
    for n in 1..=7 {
        let ring = SeriesRing::new(CheckedI64, n);
        let off = PolycubeOptions { trim: None, ..Default::default() };
        let a = assemble_counts(n, &off, &ring, AssemblyEngine::Tm).unwrap();
        let b = assemble_counts(n, &PolycubeOptions::default(), &ring, AssemblyEngine::Tm).unwrap();
        assert_eq!(a.total, b.total);
    }
}

fn trim_bound(b: &latenum::polycube::Boundary, spec: &LatticeSpec, min_height: u32) -> Bound {
    latenum::polycube::trim_lower_bound(b, spec, min_height, TrimRule::Max)
}

#[test]
fn trimming_effectiveness() {
    let spec = LatticeSpec::new(3, 4, 4).unwrap();
    let ring = SeriesRing::new(CheckedI64, 12);
    let on = enumerate_lattice(spec, 1, &PolycubeOptions::default(), &ring).unwrap();
    let off = enumerate_lattice(spec, 1, &PolycubeOptions { trim: None, ..Default::default() }, &ring).unwrap();
    assert_eq!(on.per_height, off.per_height);
    assert!(on.stats.expansions < off.stats.expansions);
    let total = |h: &std::collections::BTreeMap<usize, u64>| h.iter().map(|(len, n)| *len as u64 * n).sum::<u64>();
    let count = |h: &std::collections::BTreeMap<usize, u64>| h.values().sum::<u64>();
    assert!(count(&on.stats.gf_length_histogram) < count(&off.stats.gf_length_histogram));
    assert!(total(&on.stats.gf_length_histogram) < total(&off.stats.gf_length_histogram));
}

#[test]
fn probabilistic_caching() {
    let p = diran(25, Formulation::B);
    let runs: Vec<_> = [1.0, 0.3, 0.1]
        .iter()
        .map(|&q| (q, dp_evaluate(&p, &p.root(), &CheckedI64, &CacheConfig::with_probability(q).unwrap()).unwrap()))
        .collect();
    let full = &runs[0].1;
    for (q, run) in &runs {
        assert_eq!(run.value, full.value);
        assert!(q * full.stats.entries as f64 <= run.stats.entries as f64, "p={q}");
        assert!(run.stats.entries <= full.stats.entries, "p={q}");
    }
    assert!(runs[0].1.stats.calls <= runs[1].1.stats.calls);
    assert!(runs[1].1.stats.calls <= runs[2].1.stats.calls);
}

fn residues<P: Problem>(p: &P, moduli: &ModulusSet) -> Vec<u64> {
    moduli.moduli().iter().map(|&m| dp_count(p, &ModRing::new(m).unwrap())).collect()
}

#[test]
fn crt_reconstruction_and_corruption() {
    let moduli = ModulusSet::new(vec![10007, 10009, 10037]).unwrap();
    for n in 1..=20 {
        let p = diran(n, Formulation::B);
        let exact = crt_reconstruct(&residues(&p, &moduli), &moduli).unwrap();
        assert_eq!(exact, BigUint::from(dp_count(&p, &CheckedI64) as u64), "n={n}");
    }
    for n in 1..=14 {
        let p = Brackets::new(n);
        let exact = crt_reconstruct(&residues(&p, &moduli), &moduli).unwrap();
        assert_eq!(exact, BigUint::from(dp_count(&p, &CheckedI64) as u64), "n={n}");
    }
    // honest values with a redundant modulus pass the check, and one bad residue fails it
    for (p_res, label) in
        [(residues(&Brackets::new(14), &moduli), "brackets"), (residues(&diran(15, Formulation::A), &moduli), "diran")]
    {
        assert!(crt_check(&p_res, &moduli).is_ok(), "{label}");
        for bad in 0..3 {
            let mut rs = p_res.clone();
            rs[bad] = (rs[bad] + 1) % moduli.moduli()[bad];
            assert!(crt_check(&rs, &moduli).is_err(), "{label}, modulus {bad}");
        }
    }
}

#[test]
fn surface_moments() {
    for n in 1..=5 {
        let o = PolycubeOptions { track_surface: true, ..Default::default() };
        let full = assemble_counts(n, &o, &Gf2Ring::new(CheckedI64, n), AssemblyEngine::Tm).unwrap();
        let mom = assemble_counts(n, &o, &MomentRing::new(CheckedI64, 2, n), AssemblyEngine::Tm).unwrap();
        for k in 0..=2u32 {
            assert_eq!(
                mom.total.moment(k as usize),
                &full.total.marginal_moment(&CheckedI64, k).unwrap(),
                "n={n} M{k}"
            );
        }
        if n >= 2 {
            assert_eq!(moment_mean(&CheckedI64, &mom.total, 2).unwrap(), BigRational::from_integer(10.into()));
        }
    }
}

#[test]
fn bridge_round_trip() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let max = rng.gen_range(1..=20u32);
        let coeffs: Vec<BigInt> = (1..=max)
            .map(|_| if rng.gen_bool(0.4) { BigInt::from(rng.gen_range(1..1000u32)) } else { BigInt::from(0) })
            .collect();
        let bi = gf_truncate(&BigRing, &SparseGf::from_coeffs(&BigRing, 1, coeffs), max);
        let b = bridge_from_irreducible(&BigRing, &bi, max).unwrap();
        assert_eq!(irreducible_from_bridge(&BigRing, &b, max).unwrap(), bi);
    }
}

#[test]
fn grouped_determinism() {
    let n = 8;
    let ring = SeriesRing::new(CheckedI64, n);
    for spec in [LatticeSpec::new(2, 3, 5).unwrap(), LatticeSpec::new(3, 3, 4).unwrap()] {
        let plain = enumerate_lattice(spec, 1, &PolycubeOptions::default(), &ring).unwrap();
        let encode = |per: &[(u32, SparseGf<i64>)]| {
            let mut out = Vec::new();
            for (h, v) in per {
                out.extend_from_slice(&h.to_le_bytes());
                ring.encode(v, &mut out);
            }
            out
        };
        let mut digest = None;
        for (threads, seed) in [(1, None), (2, Some(3)), (4, Some(17)), (8, Some(2024))] {
            let o = PolycubeOptions { grouped: true, threads, shuffle_seed: seed, ..Default::default() };
            let run = enumerate_lattice(spec, 1, &o, &ring).unwrap();
            assert_eq!(encode(&run.per_height), encode(&plain.per_height));
            assert_eq!(*digest.get_or_insert(run.stats.frontier_digest), run.stats.frontier_digest);
        }
    }
}
