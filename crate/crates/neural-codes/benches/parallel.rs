//! Parallel vs sequential throughput on the data-parallel inner loops:
//! feasible-path enumeration on a large prism code, certificate
//! verification, and batch segment traces. Build with default features to
//! compare rayon against the sequential fallbacks; without the `parallel`
//! feature both sides of each pair run the same sequential code.

use criterion::{criterion_group, criterion_main, Criterion};

use neural_codes::certificates::{
    builtin_certificates, verify_certificate, verify_certificate_seq, VerifyOptions,
};
use neural_codes::families::{gen_pd, registry};
use neural_codes::geometry::{parse_realization, trace_batch, trace_batch_seq};
use neural_codes::graph::{codeword_graph, enumerate_feasible_paths, enumerate_feasible_paths_seq};
use neural_codes::Rational;

/// 112 codewords; enumerating the feasible paths between the first and the
/// all-barred maximal codeword walks a deep containment lattice.
fn bench_paths_large(c: &mut Criterion) {
    let code = gen_pd(4).unwrap();
    let graph = codeword_graph(&code);
    let maximal = code.maximal_codewords();
    let from = maximal[0];
    let to = *maximal.last().unwrap();

    let mut group = c.benchmark_group("paths/P4_maximal_pair");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| {
            enumerate_feasible_paths_seq(&graph, from, to)
                .unwrap()
                .len()
        })
    });
    group.bench_function("auto", |b| {
        b.iter(|| enumerate_feasible_paths(&graph, from, to).unwrap().len())
    });
    group.finish();
}

/// Small-code regression guard: on R (22 codewords) the auto path takes the
/// sequential route, so both sides should be close.
fn bench_paths_small(c: &mut Criterion) {
    let code = registry("R").unwrap().code;
    let graph = codeword_graph(&code);
    let pairs: Vec<_> = code
        .codewords()
        .iter()
        .flat_map(|&a| code.codewords().iter().map(move |&b| (a, b)))
        .collect();

    let mut group = c.benchmark_group("paths/R_all_pairs");
    group.sample_size(20);
    group.bench_function("seq", |b| {
        b.iter(|| {
            pairs
                .iter()
                .map(|(from, to)| {
                    enumerate_feasible_paths_seq(&graph, *from, *to)
                        .unwrap()
                        .len()
                })
                .sum::<usize>()
        })
    });
    group.bench_function("auto", |b| {
        b.iter(|| {
            pairs
                .iter()
                .map(|(from, to)| enumerate_feasible_paths(&graph, *from, *to).unwrap().len())
                .sum::<usize>()
        })
    });
    group.finish();
}

fn bench_certificates(c: &mut Criterion) {
    let certs = builtin_certificates();
    let resolved: Vec<_> = certs
        .values()
        .map(|cert| (cert.code.resolve().unwrap(), cert.clone()))
        .collect();

    let mut group = c.benchmark_group("certificates/all_builtin");
    group.sample_size(20);
    group.bench_function("seq", |b| {
        b.iter(|| {
            resolved
                .iter()
                .map(|(code, cert)| {
                    verify_certificate_seq(code, cert, VerifyOptions::default())
                        .unwrap()
                        .all_passed as usize
                })
                .sum::<usize>()
        })
    });
    group.bench_function("auto", |b| {
        b.iter(|| {
            resolved
                .iter()
                .map(|(code, cert)| {
                    verify_certificate(code, cert, VerifyOptions::default())
                        .unwrap()
                        .all_passed as usize
                })
                .sum::<usize>()
        })
    });
    group.finish();
}

fn bench_intersection_complete(c: &mut Criterion) {
    let p5 = gen_pd(5).unwrap();
    let mut group = c.benchmark_group("intersection_complete/P5");
    group.sample_size(20);
    group.bench_function("check", |b| b.iter(|| p5.is_intersection_complete()));
    group.finish();
}

fn bench_traces(c: &mut Criterion) {
    let fixture = include_str!("../../../fixtures/p1_open.json");
    let realization = parse_realization(fixture).unwrap();
    let segments: Vec<(Vec<Rational>, Vec<Rational>)> = (0..200)
        .map(|i| {
            (
                vec![Rational::new(-7 * (i % 13 + 1), i % 5 + 1)],
                vec![Rational::new(9 * (i % 11 + 1), i % 7 + 1)],
            )
        })
        .collect();

    let mut group = c.benchmark_group("trace_batch/200_segments");
    group.sample_size(20);
    group.bench_function("seq", |b| {
        b.iter(|| trace_batch_seq(&realization, &segments).unwrap().len())
    });
    group.bench_function("auto", |b| {
        b.iter(|| trace_batch(&realization, &segments).unwrap().len())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_paths_large,
    bench_paths_small,
    bench_certificates,
    bench_intersection_complete,
    bench_traces
);
criterion_main!(benches);
