use std::time::Duration;

use cagvrp::bnc::root_relaxation_value;
use cagvrp::tsp::tsp_heuristic;
use cagvrp::{
    build_model, build_transformed_graph, brute_force, generate_instance, solve_exact, solve_gtsp_lns,
    InstanceClass, LnsParams, ModelOptions, SolveParams,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn model_and_relaxation(c: &mut Criterion) {
    let mut group = c.benchmark_group("relaxation");
    group.sample_size(20);
    for n in [10, 20, 30] {
        let inst = generate_instance(InstanceClass::A, n, 0.1, 7).unwrap();
        group.bench_with_input(BenchmarkId::new("build_model", n), &inst, |b, inst| {
            b.iter(|| build_model(black_box(inst), ModelOptions::default()))
        });
        group.bench_with_input(BenchmarkId::new("root_lp", n), &inst, |b, inst| {
            b.iter(|| root_relaxation_value(black_box(inst), ModelOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    let small = generate_instance(InstanceClass::A, 8, 0.2, 3).unwrap();
    group.bench_function("oracle_n8", |b| b.iter(|| brute_force(black_box(&small)).unwrap()));
    group.bench_function("bnc_n8", |b| b.iter(|| solve_exact(black_box(&small), &SolveParams::default()).unwrap()));
    let mid = generate_instance(InstanceClass::A, 12, 0.2, 3).unwrap();
    group.bench_function("bnc_n12", |b| b.iter(|| solve_exact(black_box(&mid), &SolveParams::default()).unwrap()));
    group.finish();
}

fn heuristic(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    group.sample_size(10);
    for n in [20, 40] {
        let inst = generate_instance(InstanceClass::C, n, 0.1, 11).unwrap();
        group.bench_with_input(BenchmarkId::new("build_graph", n), &inst, |b, inst| {
            b.iter(|| build_transformed_graph(black_box(inst)).unwrap())
        });
        let tg = build_transformed_graph(&inst).unwrap();
        let params = LnsParams { iterations: Some(500), seed: 1, ..LnsParams::default() };
        group.bench_with_input(BenchmarkId::new("lns_500", n), &tg, |b, tg| {
            b.iter(|| solve_gtsp_lns(black_box(tg.gtsp()), &params).unwrap())
        });
    }
    let inst = generate_instance(InstanceClass::A, 60, 0.1, 5).unwrap();
    let nodes: Vec<usize> = (0..inst.len()).collect();
    group.bench_function("tsp_heuristic_60", |b| b.iter(|| tsp_heuristic(inst.gv_costs(), black_box(&nodes))));
    group.finish();
}

criterion_group!(benches, model_and_relaxation, exact, heuristic);
criterion_main!(benches);
