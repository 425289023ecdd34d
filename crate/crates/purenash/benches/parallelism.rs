//! Compares the rayon-parallel default paths against their sequential
//! fallbacks on representative workloads: an exhaustive equilibrium scan
//! over a cyclic game with no equilibrium (every profile is visited) and
//! the tree-decomposition homomorphism DP on a width-2 structure with
//! large bag tables. On a single-core host the two paths should be within
//! scheduling overhead of each other; the gap is the point of the suite.

use criterion::{criterion_group, criterion_main, Criterion};

use purenash::gadgets::cycle_game;
use purenash::games::{brute_force_psne, brute_force_psne_serial};
use purenash::graphs::primal_graph;
use purenash::homomorphism::{dp_hom, dp_hom_serial};
use purenash::pipeline::game_to_hom;
use purenash::treewidth::heuristic_decomposition;

fn bench_brute_force(c: &mut Criterion) {
    // 7^6 profiles, none of them an equilibrium, so every profile is checked.
    let game = cycle_game(6, 7).expect("valid cycle game");
    let mut group = c.benchmark_group("brute-force-psne");
    group.bench_function("parallel", |b| {
        b.iter(|| brute_force_psne(&game, u64::MAX).expect("under cap"))
    });
    group.bench_function("serial", |b| {
        b.iter(|| brute_force_psne_serial(&game, u64::MAX).expect("under cap"))
    });
    group.finish();
}

fn bench_tree_dp(c: &mut Criterion) {
    // The induced structure of a 16-cycle has primal treewidth 2, so the
    // DP is polynomial, but with 32 actions each bag table holds 32^3 rows
    // — enough work per bag for the data-parallel row filter to matter.
    let game = cycle_game(16, 32).expect("valid cycle game");
    let instance = game_to_hom(&game);
    let td = heuristic_decomposition(&primal_graph(&instance.left));
    let mut group = c.benchmark_group("tree-dp-hom");
    group.bench_function("parallel", |b| b.iter(|| dp_hom(&instance, &td).expect("no cap")));
    group.bench_function("serial", |b| {
        b.iter(|| dp_hom_serial(&instance, &td).expect("no cap"))
    });
    group.finish();
}

criterion_group!(benches, bench_brute_force, bench_tree_dp);
criterion_main!(benches);
