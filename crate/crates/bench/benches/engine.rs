//! Benchmarks for the engine's four cost centers: path evaluation, the
//! polynomial node-positive repair, exhaustive fact-lattice enumeration,
//! and multiset comparison. Inputs are seeded, so runs are comparable.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gxr_core::fixtures::{
    film_director_rules, film_graph, network_drop_one_high, network_drop_two_low,
    network_label_order,
};
use gxr_core::sampling::{self, SampleSpace};
use gxr_core::{
    compare, eval_path, parse_path, preferred_repairs, repair_node_pos, PreferenceCriterion,
    SearchConfig, SearchMode,
};

fn bench_eval_star(c: &mut Criterion) {
    let space = SampleSpace::small();
    let expr = parse_path("(a | b)*").unwrap();
    let mut group = c.benchmark_group("eval_star");
    for nodes in [50, 100, 200] {
        let mut rng = sampling::rng(nodes as u64);
        let g = sampling::graph(&mut rng, nodes, 3 * nodes, &space);
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &g, |b, g| {
            b.iter(|| eval_path(g, &expr))
        });
    }
    group.finish();
}

fn bench_node_positive_repair(c: &mut Criterion) {
    let space = SampleSpace::small();
    let mut group = c.benchmark_group("node_positive_repair");
    for nodes in [50, 100, 200] {
        let mut rng = sampling::rng(nodes as u64);
        let g = sampling::graph(&mut rng, nodes, 3 * nodes, &space);
        let r = sampling::node_pos_constraints(&mut rng, 3, 2, &space);
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &g, |b, g| {
            b.iter(|| repair_node_pos(g, &r).unwrap())
        });
    }
    group.finish();
}

fn bench_fact_lattice(c: &mut Criterion) {
    let space = SampleSpace::small();
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("fact_lattice_subset_repairs");
    group.sample_size(10);
    for facts in [12, 16, 20] {
        let mut rng = sampling::rng(facts as u64);
        let g = sampling::graph_max_facts(&mut rng, facts, &space);
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space);
        group.bench_with_input(BenchmarkId::from_parameter(facts), &g, |b, g| {
            b.iter(|| {
                preferred_repairs(
                    g,
                    &r,
                    &PreferenceCriterion::Subset,
                    SearchMode::FactLattice,
                    &cfg,
                )
                .unwrap()
            })
        });
    }

    // The full worked example: 21 facts, two interacting node constraints.
    let g = film_graph();
    let r = film_director_rules();
    group.bench_function("film_director_rules", |b| {
        b.iter(|| {
            preferred_repairs(
                &g,
                &r,
                &PreferenceCriterion::Subset,
                SearchMode::FactLattice,
                &cfg,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn bench_multiset_compare(c: &mut Criterion) {
    let crit = PreferenceCriterion::Multiset(network_label_order());
    let lhs = network_drop_one_high();
    let rhs = network_drop_two_low();
    c.bench_function("multiset_compare", |b| {
        b.iter(|| compare(&crit, &lhs, &rhs).unwrap())
    });
}

criterion_group!(
    benches,
    bench_eval_star,
    bench_node_positive_repair,
    bench_fact_lattice,
    bench_multiset_compare
);
criterion_main!(benches);
