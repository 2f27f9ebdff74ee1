//! Parallel strategy against the always-sequential fallback on the two
//! workloads that actually fan out in the library: the all-pairs scan
//! behind the axiom checkers and the per-degree map behind the graded
//! model builder.

use criterion::{criterion_group, criterion_main, Criterion};

use continuum_km::cartan::euler_form_runpair;
use continuum_km::enumerate::enumerate_intervals;
use continuum_km::graded::{gabber_kac_mult, CartanMatrix};
use continuum_km::interval::Interval;
use continuum_km::par;
use continuum_km::rat::{rat, rat_int};
use continuum_km::shape::wedge_graph;
use continuum_km::step::{euler_form, StepFunction};

/// Scan every ordered interval pair on a dense wedge pool, checking the
/// step-function Euler form against the run-pair count.  Mirrors the
/// shape of the checker scans: fallible per-item closure, no failures,
/// so both strategies walk the whole slice.
fn pair_scan(c: &mut Criterion) {
    let g = wedge_graph();
    let pool = enumerate_intervals(&g, rat(1, 4), 3, (rat_int(0), rat_int(1)));
    let pairs: Vec<(Interval, Interval)> = pool
        .iter()
        .flat_map(|x| pool.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let check = |p: &(Interval, Interval)| -> Option<String> {
        let fx = StepFunction::indicator(&g, &p.0);
        let fy = StepFunction::indicator(&g, &p.1);
        let via_form = euler_form(&g, &fx, &fy);
        let via_runs = rat_int(euler_form_runpair(&g, &p.0, &p.1));
        (via_form != via_runs).then(|| format!("{} vs {}", p.0.display(&g), p.1.display(&g)))
    };

    let mut group = c.benchmark_group("pair-scan");
    group.bench_function("parallel", |b| {
        b.iter(|| assert!(par::first_failure(&pairs, check).is_none()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| assert!(par::first_failure_seq(&pairs, check).is_none()))
    });
    group.finish();
}

/// Map a multiplicity computation over every degree of bounded height
/// for the cyclic rank-3 affine matrix.  Mirrors the per-degree space
/// construction in the graded model: independent, uneven work items.
fn degree_map(c: &mut Criterion) {
    let a = CartanMatrix::new(vec![
        vec![2, -1, -1],
        vec![-1, 2, -1],
        vec![-1, -1, 2],
    ])
    .unwrap();
    let mut degs: Vec<Vec<usize>> = Vec::new();
    for h in 1..=6 {
        for i in 0..=h {
            for j in 0..=(h - i) {
                degs.push(vec![i, j, h - i - j]);
            }
        }
    }
    let mult = |beta: &Vec<usize>| gabber_kac_mult(&a, beta).unwrap();

    let mut group = c.benchmark_group("degree-map");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| par::map_slice(&degs, mult).iter().sum::<usize>())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| par::map_slice_seq(&degs, mult).iter().sum::<usize>())
    });
    group.finish();
}

criterion_group!(benches, pair_scan, degree_map);
criterion_main!(benches);
