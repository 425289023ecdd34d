//! End-to-end acceptance gate. Each test exercises one guarantee the
//! toolkit makes, at desk scale against exhaustive oracles, and prints a
//! single `criterion N (...): PASS` / `FAIL` line (visible under
//! `--nocapture`; the harness result line carries the same verdict).

use purenash::gadgets::{
    cycle_game, example15, hom_to_chg, hom_to_gg, hom_to_gg_direct, strongly_connected_game,
};
use purenash::games::{brute_force_psne, is_psne, Game, DEFAULT_PROFILE_CAP};
use purenash::generate::{
    random_chg, random_colored_hypergraph, random_digraph, random_game_hypergraph,
    random_graphical_game, random_hom_instance, random_irreducible_digraph,
    random_strongly_connected_digraph, random_tree, rng_from_seed,
};
use purenash::graphs::{
    induced_digraph, induced_hypergraph, is_irreducible, primal_graph, Digraph, UndirectedGraph,
};
use purenash::homomorphism::{
    brute_force_hom, check_homomorphism, core, core_treewidth, dp_hom, HomInstance,
    DEFAULT_HOM_CAP,
};
use purenash::pipeline::{decide_psne_chg, decide_psne_graphical, game_to_hom, SolveConfig};
use purenash::reduction::{extend_psne, reduce_game};
use purenash::treewidth::{
    decomposition_from_order, exact_treewidth, heuristic_decomposition, validate_decomposition,
    TreeDecomposition,
};
use rand::Rng;

/// Collects failures so the verdict line always prints before any panic.
struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { failures: Vec::new() }
    }

    fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond && self.failures.len() < 8 {
            self.failures.push(msg());
        } else if !cond {
            self.failures.push("… more failures truncated".into());
        }
    }

    fn finish(self, n: usize, name: &str) {
        let pass = self.failures.is_empty();
        println!("criterion {n} ({name}): {}", if pass { "PASS" } else { "FAIL" });
        assert!(
            pass,
            "criterion {n} ({name}) failed:\n{}",
            self.failures.join("\n")
        );
    }
}

#[test]
fn criterion_01_reduction_preserves_equilibria() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(101);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=6);
        let g = random_digraph(&mut rng, n, 0.4);
        let game = random_graphical_game(&mut rng, g, 3);
        let full = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        let (reduced, trace) = reduce_game(&game);
        let red = brute_force_psne(&reduced, DEFAULT_PROFILE_CAP).unwrap();
        c.check(full.is_some() == red.is_some(), || {
            format!(
                "trial {trial}: full game PSNE existence {} but reduced {}",
                full.is_some(),
                red.is_some()
            )
        });
        if let Some(w) = &red {
            match extend_psne(&game, &trace, w) {
                Ok(ext) => c.check(is_psne(&game, &ext), || {
                    format!("trial {trial}: extended profile {ext:?} is not an equilibrium")
                }),
                Err(e) => c.check(false, || format!("trial {trial}: extension failed: {e}")),
            }
        }
    }
    c.finish(1, "sink-player reduction preserves equilibrium existence");
}

#[test]
fn criterion_02_game_to_hom_matches_oracle() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(202);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=6);
        let structure = random_game_hypergraph(&mut rng, n, 2);
        let m = rng.gen_range(1..=3);
        let game = random_chg(&mut rng, structure, m);
        let inst = game_to_hom(&game);
        let hom = brute_force_hom(&inst, DEFAULT_HOM_CAP).unwrap();
        let psne = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(hom.is_some() == psne.is_some(), || {
            format!(
                "trial {trial}: hom existence {} but equilibrium existence {}",
                hom.is_some(),
                psne.is_some()
            )
        });
        // The translation is witness-preserving in both directions: a
        // mapping read as a profile is an equilibrium and vice versa.
        if let Some(mapping) = &hom {
            c.check(is_psne(&game, mapping), || {
                format!("trial {trial}: hom witness {mapping:?} is not an equilibrium")
            });
        }
        if let Some(profile) = &psne {
            c.check(check_homomorphism(&inst, profile), || {
                format!("trial {trial}: equilibrium {profile:?} is not a homomorphism")
            });
        }
    }
    c.finish(2, "game-to-homomorphism translation matches the exhaustive oracle");
}

#[test]
fn criterion_03_solver_matches_oracle() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(303);
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let structure = random_game_hypergraph(&mut rng, n, 2);
        let m = rng.gen_range(1..=3);
        let game = random_chg(&mut rng, structure, m);
        let cfg = SolveConfig { core_first: trial % 4 == 0, ..SolveConfig::default() };
        let outcome = decide_psne_chg(&game, &cfg).unwrap();
        let oracle = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(outcome.exists == oracle.is_some(), || {
            format!(
                "chg trial {trial}: solver said {} but oracle said {}",
                outcome.exists,
                oracle.is_some()
            )
        });
        if let Some(w) = &outcome.witness {
            c.check(is_psne(&game, w), || {
                format!("chg trial {trial}: solver witness {w:?} is not an equilibrium")
            });
        }
        c.check(outcome.exists == outcome.witness.is_some(), || {
            format!("chg trial {trial}: existence flag and witness disagree")
        });
    }
    for trial in 0..500 {
        let n = rng.gen_range(1..=6);
        let g = random_digraph(&mut rng, n, 0.4);
        let game = random_graphical_game(&mut rng, g, 3);
        let cfg = SolveConfig::default();
        let outcome = decide_psne_graphical(&game, &cfg).unwrap();
        let oracle = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(outcome.exists == oracle.is_some(), || {
            format!(
                "graphical trial {trial}: solver said {} but oracle said {}",
                outcome.exists,
                oracle.is_some()
            )
        });
        if let Some(w) = &outcome.witness {
            c.check(is_psne(&game, w), || {
                format!("graphical trial {trial}: solver witness {w:?} is not an equilibrium")
            });
        }
    }
    c.finish(3, "pipeline solver agrees with the exhaustive oracle and emits valid witnesses");
}

#[test]
fn criterion_04_tree_dp_matches_brute_force() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(404);
    for trial in 0..500 {
        let inst = random_hom_instance(&mut rng, 6, 4);
        let brute = brute_force_hom(&inst, DEFAULT_HOM_CAP).unwrap();
        let primal = primal_graph(&inst.left);
        let n = primal.vertex_count();
        // Three structurally different decompositions of the same graph.
        let heuristic = heuristic_decomposition(&primal);
        let single = TreeDecomposition::new(vec![(0..n).collect()], vec![]);
        let reversed: Vec<usize> = (0..n).rev().collect();
        let from_order = decomposition_from_order(&primal, &reversed).unwrap();
        for (label, td) in
            [("heuristic", &heuristic), ("single-bag", &single), ("reverse-order", &from_order)]
        {
            c.check(validate_decomposition(&primal, td).is_ok(), || {
                format!("trial {trial}: {label} decomposition is invalid")
            });
            let dp = dp_hom(&inst, td).unwrap();
            c.check(dp.is_some() == brute.is_some(), || {
                format!(
                    "trial {trial}: {label} dp existence {} but brute force {}",
                    dp.is_some(),
                    brute.is_some()
                )
            });
            if let Some(mapping) = &dp {
                c.check(check_homomorphism(&inst, mapping), || {
                    format!("trial {trial}: {label} dp witness {mapping:?} is not a homomorphism")
                });
            }
        }
    }
    c.finish(4, "tree-decomposition DP agrees with brute force across decompositions");
}

#[test]
fn criterion_05_hardness_gadgets_preserve_existence() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(505);
    // Graphical encoding with the two failure actions.
    for trial in 0..200 {
        let n = rng.gen_range(2..=4);
        let g = random_irreducible_digraph(&mut rng, n, 0.5);
        let colors = scope_colors(&g);
        let hn = rng.gen_range(1..=3);
        let edge_count = rng.gen_range(0..=6);
        let h = random_colored_hypergraph(&mut rng, hn, edge_count, &colors);
        let inst = HomInstance { left: induced_hypergraph(&g).into_hypergraph(), right: h.clone() };
        let hom = brute_force_hom(&inst, DEFAULT_HOM_CAP).unwrap();
        let game = hom_to_gg(&g, &h).unwrap();
        let psne = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(hom.is_some() == psne.is_some(), || {
            format!(
                "graphical gadget trial {trial}: hom {} but equilibrium {}",
                hom.is_some(),
                psne.is_some()
            )
        });
    }
    // Colored encoding with the failure-action chain.
    for trial in 0..100 {
        let n = rng.gen_range(2..=3);
        let g = random_irreducible_digraph(&mut rng, n, 0.5);
        let structure = induced_hypergraph(&g);
        let colors = scope_colors(&g);
        let hn = rng.gen_range(1..=3);
        let edge_count = rng.gen_range(0..=6);
        let h = random_colored_hypergraph(&mut rng, hn, edge_count, &colors);
        let inst =
            HomInstance { left: structure.hypergraph().clone(), right: h.clone() };
        let hom = brute_force_hom(&inst, DEFAULT_HOM_CAP).unwrap();
        let game = hom_to_chg(&structure, &h).unwrap();
        let psne = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(hom.is_some() == psne.is_some(), || {
            format!(
                "colored gadget trial {trial}: hom {} but equilibrium {}",
                hom.is_some(),
                psne.is_some()
            )
        });
    }
    // Direct watcher-pair encoding (works for arbitrary left structures).
    for trial in 0..100 {
        let gn = rng.gen_range(1..=3);
        let colors =
            vec![("p".to_string(), 2), ("q".to_string(), if trial % 2 == 0 { 1 } else { 2 })];
        let g_edges = rng.gen_range(1..=4);
        let g = random_colored_hypergraph(&mut rng, gn, g_edges, &colors);
        let hn = rng.gen_range(1..=3);
        let h_edges = rng.gen_range(0..=4);
        let h = random_colored_hypergraph(&mut rng, hn, h_edges, &colors);
        let inst = HomInstance { left: g.clone(), right: h.clone() };
        let hom = brute_force_hom(&inst, DEFAULT_HOM_CAP).unwrap();
        let game = hom_to_gg_direct(&g, &h).unwrap();
        let psne = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(hom.is_some() == psne.is_some(), || {
            format!(
                "direct gadget trial {trial}: hom {} but equilibrium {}",
                hom.is_some(),
                psne.is_some()
            )
        });
    }
    c.finish(5, "hardness gadgets preserve existence against double exhaustive oracles");
}

#[test]
fn criterion_06_cyclic_families_lack_equilibria() {
    let mut c = Checker::new();
    for n in 2..=5usize {
        for p in (n + 1)..=(n + 3) {
            let game = cycle_game(n, p).unwrap();
            let found = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
            c.check(found.is_none(), || {
                format!("cycle game n={n} p={p} unexpectedly has equilibrium {found:?}")
            });
        }
    }
    let small = cycle_game(2, 2).unwrap();
    let found = brute_force_psne(&small, DEFAULT_PROFILE_CAP).unwrap();
    c.check(found.is_some(), || {
        "cycle game n=2 p=2 should have an equilibrium (p <= n)".into()
    });
    let mut rng = rng_from_seed(606);
    for trial in 0..50 {
        let n = rng.gen_range(2..=4);
        let g = random_strongly_connected_digraph(&mut rng, n, 0.3);
        let game = strongly_connected_game(&g).unwrap();
        let found = brute_force_psne(&game, DEFAULT_PROFILE_CAP).unwrap();
        c.check(found.is_none(), || {
            format!("strongly connected trial {trial} (n={n}) has equilibrium {found:?}")
        });
    }
    c.finish(6, "modular cycle and strongly connected families have no equilibria");
}

#[test]
fn criterion_07_watcher_family_collapses_to_small_core() {
    let mut c = Checker::new();
    for m in 1..=2usize {
        let structure = example15(m).unwrap();
        c.check(is_irreducible(&induced_digraph(&structure)), || {
            format!("watcher family m={m} should be irreducible")
        });
    }
    let full = example15(2).unwrap();
    let h = full.hypergraph();
    let fragment_ids = ["l1", "r1", "x1_1", "y1_1"];
    let fragment_set: Vec<usize> = fragment_ids
        .iter()
        .map(|id| {
            (0..h.vertex_count())
                .find(|&v| h.id(v) == *id)
                .expect("fragment vertex present")
        })
        .collect();
    let fragment = h.induced(&fragment_set);
    // Forward direction via the tree DP (the brute-force mapping space is
    // 4^12); backward via brute force (12^4 is tiny).
    let forward_inst = HomInstance { left: h.clone(), right: fragment.clone() };
    let td = heuristic_decomposition(&primal_graph(&forward_inst.left));
    let forward = dp_hom(&forward_inst, &td).unwrap();
    c.check(forward.is_some(), || {
        "full m=2 structure does not map onto its 4-vertex fragment".into()
    });
    let backward_inst = HomInstance { left: fragment.clone(), right: h.clone() };
    let backward = brute_force_hom(&backward_inst, DEFAULT_HOM_CAP).unwrap();
    c.check(backward.is_some(), || {
        "4-vertex fragment does not map back into the full m=2 structure".into()
    });
    // The equivalent fragment is already a core, with a 4-clique primal.
    let (width, core_result) = core_treewidth(&fragment, 8, 14).unwrap();
    c.check(core_result.vertex_set.len() == 4, || {
        format!("fragment core has {} vertices, expected 4", core_result.vertex_set.len())
    });
    c.check(width == 3, || format!("fragment core treewidth {width}, expected 3"));
    // The full structure's own treewidth grows with m, so the collapse is
    // what makes the family tractable.
    for m in 1..=2usize {
        let structure = example15(m).unwrap();
        let (full_width, _) =
            exact_treewidth(&primal_graph(structure.hypergraph()), 14).unwrap();
        c.check(full_width >= m as i64, || {
            format!("full m={m} primal treewidth {full_width} below family size")
        });
    }
    c.finish(7, "watcher family is equivalent to a constant-size core of treewidth 3");
}

#[test]
fn criterion_08_induced_structures_are_cores() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(808);
    for trial in 0..100 {
        let n = rng.gen_range(1..=5);
        let g = random_digraph(&mut rng, n, 0.4);
        let h = induced_hypergraph(&g).into_hypergraph();
        let result = core(&h, 8).unwrap();
        c.check(result.vertex_set.len() == n, || {
            format!(
                "trial {trial}: induced structure on {n} vertices has proper core {:?}",
                result.vertex_set
            )
        });
    }
    c.finish(8, "per-player-colored induced structures are their own cores");
}

#[test]
fn criterion_09_treewidth_oracles_agree() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(909);
    for _ in 0..50 {
        let n = rng.gen_range(2..=10);
        let tree = random_tree(&mut rng, n);
        let (width, _) = exact_treewidth(&tree, 14).unwrap();
        c.check(width == 1, || format!("tree on {n} vertices has exact width {width}"));
    }
    for k in 2..=6usize {
        let names: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                edges.push((names[a].clone(), names[b].clone()));
            }
        }
        let clique = UndirectedGraph::new(names, edges).unwrap();
        let (width, _) = exact_treewidth(&clique, 14).unwrap();
        c.check(width == (k as i64) - 1, || format!("K_{k} has exact width {width}"));
    }
    for n in 3..=8usize {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> =
            (0..n).map(|i| (names[i].clone(), names[(i + 1) % n].clone())).collect();
        let cycle = UndirectedGraph::new(names, edges).unwrap();
        let (width, _) = exact_treewidth(&cycle, 14).unwrap();
        c.check(width == 2, || format!("C_{n} has exact width {width}"));
    }
    for trial in 0..200 {
        let n = rng.gen_range(2..=10);
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(0.35) {
                    edges.push((names[a].clone(), names[b].clone()));
                }
            }
        }
        let graph = UndirectedGraph::new(names, edges).unwrap();
        let heuristic = heuristic_decomposition(&graph);
        c.check(validate_decomposition(&graph, &heuristic).is_ok(), || {
            format!("trial {trial}: heuristic decomposition invalid")
        });
        let (exact, exact_td) = exact_treewidth(&graph, 14).unwrap();
        c.check(validate_decomposition(&graph, &exact_td).is_ok(), || {
            format!("trial {trial}: exact decomposition invalid")
        });
        c.check(heuristic.width() >= exact, || {
            format!(
                "trial {trial}: heuristic width {} below exact {exact}",
                heuristic.width()
            )
        });
        c.check(exact_td.width() == exact, || {
            format!(
                "trial {trial}: exact decomposition width {} mismatches reported {exact}",
                exact_td.width()
            )
        });
    }
    c.finish(9, "treewidth oracles agree on known families and random graphs");
}

#[test]
fn criterion_10_direct_gadget_respects_width_bound() {
    let mut c = Checker::new();
    let mut rng = rng_from_seed(1010);
    for trial in 0..50 {
        let gn = rng.gen_range(2..=4);
        let colors = vec![("p".to_string(), 2), ("q".to_string(), 1)];
        let g_edges = rng.gen_range(1..=4);
        let g = random_colored_hypergraph(&mut rng, gn, g_edges, &colors);
        let h = random_colored_hypergraph(&mut rng, 2, 2, &colors);
        let game = hom_to_gg_direct(&g, &h).unwrap();
        let gadget_primal = primal_graph(induced_hypergraph(game.graph()).hypergraph());
        let (gadget_width, _) = exact_treewidth(&gadget_primal, 14).unwrap();
        let (left_width, _) = exact_treewidth(&primal_graph(&g), 14).unwrap();
        c.check(gadget_width <= left_width + 2, || {
            format!(
                "trial {trial}: gadget width {gadget_width} exceeds input width {left_width} + 2"
            )
        });
    }
    c.finish(10, "direct gadget increases primal treewidth by at most two");
}

/// The (color, arity) pool matching a digraph's induced structure: one
/// color per vertex, arity one plus its in-degree.
fn scope_colors(g: &Digraph) -> Vec<(String, usize)> {
    (0..g.vertex_count())
        .map(|v| (g.id(v).to_string(), 1 + g.in_neighbors(v).len()))
        .collect()
}
