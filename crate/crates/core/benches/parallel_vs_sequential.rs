use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eof_bounds::envelopes::{build_envelopes_with, Extremum, Mode};
use eof_bounds::matops::{two_copy_expectation_with, BipartiteDims, TwoCopyOperatorId};
use eof_bounds::oracles::{
    entropy_extremum_bruteforce_with, random_state, verify_envelopes_with, BruteForceOptions, StateKind,
};
use eof_bounds::{Exec, Seed};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn envelopes(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_envelopes_m4");
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| build_envelopes_with(black_box(4), Mode::Oracle, 10_001, exec).unwrap())
        });
    }
    g.finish();
}

fn verification(c: &mut Criterion) {
    let env = build_envelopes_with(3, Mode::Oracle, 10_001, Exec::default()).unwrap();
    let mut g = c.benchmark_group("verify_envelopes_m3_20k");
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_envelopes_with(&env, black_box(20_000), Seed(1), &[], exec).unwrap())
        });
    }
    g.finish();
}

fn bruteforce(c: &mut Criterion) {
    let opts = BruteForceOptions::default();
    let mut g = c.benchmark_group("bruteforce_max_m5");
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| entropy_extremum_bruteforce_with(5, black_box(0.5), Extremum::X, opts, Seed(2), exec).unwrap())
        });
    }
    g.finish();
}

fn two_copy(c: &mut Criterion) {
    let dims = BipartiteDims::new(2, 4).unwrap();
    let state = random_state(dims, StateKind::MixedRank(8), Seed(3)).unwrap();
    let mut g = c.benchmark_group("two_copy_v1_2x4");
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| two_copy_expectation_with(black_box(&state), TwoCopyOperatorId::V1, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, envelopes, verification, bruteforce, two_copy);
criterion_main!(benches);
