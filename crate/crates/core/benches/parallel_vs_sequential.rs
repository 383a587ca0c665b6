use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pne_core::equilibria::prepare_clique_tree;
use pne_core::game::brute_force_equilibria_with;
use pne_core::generate::{generate, Family, GenParams};
use pne_core::heuristics::{run_chains, ChainConfig};
use pne_core::junction::{calibrate_with, load_potentials_with};
use pne_core::mrf::build_mrf_with;
use pne_core::{fixtures, solve, Counting, Execution, PipelineStrategy};

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brute_force(c: &mut Criterion) {
    let game = fixtures::path_coordination(16);
    let mut group = c.benchmark_group("brute_force_path16");
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| brute_force_equilibria_with(black_box(&game), u128::MAX, exec).unwrap())
        });
    }
    group.finish();
}

fn calibration(c: &mut Criterion) {
    let game =
        generate(&GenParams { family: Family::Grid, players: 30, max_strategies: 3, seed: 5, ..GenParams::default() })
            .unwrap();
    let tree = prepare_clique_tree(&game, &PipelineStrategy::default()).unwrap().tree;
    let mut group = c.benchmark_group("grid30_counting");
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::new("build_and_load", name), |b| {
            b.iter(|| {
                let mrf = build_mrf_with(black_box(&game), 0.0, Counting, exec).unwrap();
                load_potentials_with(&tree, &mrf, exec).unwrap()
            })
        });
        let mrf = build_mrf_with(&game, 0.0, Counting, exec).unwrap();
        let loaded = load_potentials_with(&tree, &mrf, exec).unwrap();
        group.bench_function(BenchmarkId::new("calibrate", name), |b| {
            b.iter(|| calibrate_with(black_box(&loaded), None, exec))
        });
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let game = generate(&GenParams {
        family: Family::Tree,
        players: 2000,
        max_strategies: 3,
        seed: 1,
        ..GenParams::default()
    })
    .unwrap();
    let mut group = c.benchmark_group("tree2000_solve");
    group.sample_size(10);
    for (name, execution) in POLICIES {
        let strategy = PipelineStrategy { enumeration_limit: Some(10), execution, ..PipelineStrategy::default() };
        group.bench_function(name, |b| b.iter(|| solve(black_box(&game), &strategy).unwrap()));
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let game = fixtures::cycle_coordination(64);
    let cfg = ChainConfig { epsilon: 0.3, steps: 20_000, seed: 0 };
    let seeds: Vec<u64> = (0..16).collect();
    let mut group = c.benchmark_group("metropolis_16_chains");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| run_chains(black_box(&game), &cfg, &seeds, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, brute_force, calibration, pipeline, chains);
criterion_main!(benches);
