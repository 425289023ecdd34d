//! Seeded random instances for tests and fixture emission. Every generator
//! takes an explicit RNG, so a fixed seed reproduces the exact instance;
//! utilities are drawn from a small rational grid so best-response ties
//! actually occur.

use std::collections::BTreeSet;

use num::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gadgets::example15;
use crate::games::{rat, ColoredHypergraphicalGame, GraphicalGame};
use crate::graphs::{ColoredHypergraph, Digraph, GameHypergraph, UndirectedGraph};
use crate::homomorphism::HomInstance;
use crate::reduction::reduce_digraph;

/// The RNG used throughout: small, seedable, portable across platforms.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational from {-2, …, 2} / {1, 2}; fifteen distinct values, so small
/// tables collide often enough to exercise tie handling.
pub fn random_rational(rng: &mut impl Rng) -> BigRational {
    rat(rng.gen_range(-2..=2), rng.gen_range(1..=2))
}

/// A digraph on `n` vertices where each of the n(n−1) possible arcs is
/// present independently with probability `arc_prob`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, arc_prob: f64) -> Digraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arcs = Vec::new();
    for u in 0..n {
        for w in 0..n {
            if u != w && rng.gen_bool(arc_prob) {
                arcs.push((names[u].clone(), names[w].clone()));
            }
        }
    }
    Digraph::new(names, arcs).expect("generated arcs are simple and in range")
}

/// An irreducible digraph with at most `n` vertices: sample random digraphs
/// and keep the sink-free kernel of the first one that is nonempty (this
/// yields varied shapes, including several terminal components). Falls back
/// to a spanning directed cycle, which is irreducible outright.
pub fn random_irreducible_digraph(rng: &mut impl Rng, n: usize, arc_prob: f64) -> Digraph {
    assert!(n >= 2, "no irreducible digraph has fewer than two vertices");
    for _ in 0..16 {
        let g = random_digraph(rng, n, arc_prob);
        let (kernel, _) = reduce_digraph(&g);
        if kernel.vertex_count() >= 2 {
            return kernel;
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let arcs = (0..n)
        .map(|k| (names[order[k]].clone(), names[order[(k + 1) % n]].clone()))
        .collect();
    Digraph::new(names, arcs).expect("a directed cycle is a valid digraph")
}

/// A strongly connected digraph on exactly `n` vertices: a random spanning
/// directed cycle plus independent extra arcs.
pub fn random_strongly_connected_digraph(
    rng: &mut impl Rng,
    n: usize,
    extra_prob: f64,
) -> Digraph {
    assert!(n >= 2);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for k in 0..n {
        set.insert((order[k], order[(k + 1) % n]));
    }
    for u in 0..n {
        for w in 0..n {
            if u != w && rng.gen_bool(extra_prob) {
                set.insert((u, w));
            }
        }
    }
    let arcs = set.into_iter().map(|(u, w)| (names[u].clone(), names[w].clone())).collect();
    Digraph::new(names, arcs).expect("generated arcs are simple and in range")
}

/// A graphical game on `graph` with `counts[p]` actions for player p and
/// utilities drawn from [`random_rational`].
pub fn random_graphical_game_with_counts(
    rng: &mut impl Rng,
    graph: Digraph,
    counts: &[usize],
) -> GraphicalGame {
    let n = graph.vertex_count();
    assert_eq!(counts.len(), n);
    let actions: Vec<Vec<String>> =
        counts.iter().map(|&c| (0..c).map(|a| format!("a{a}")).collect()).collect();
    let mut tables = Vec::with_capacity(n);
    for p in 0..n {
        let mut size = counts[p];
        for &v in graph.in_neighbors(p) {
            size *= counts[v];
        }
        tables.push((0..size).map(|_| random_rational(rng)).collect());
    }
    GraphicalGame::new(graph, actions, tables).expect("tables are sized to the scopes")
}

/// A graphical game with 1..=`max_actions` actions per player, drawn
/// independently.
pub fn random_graphical_game(
    rng: &mut impl Rng,
    graph: Digraph,
    max_actions: usize,
) -> GraphicalGame {
    let counts: Vec<usize> =
        (0..graph.vertex_count()).map(|_| rng.gen_range(1..=max_actions)).collect();
    random_graphical_game_with_counts(rng, graph, &counts)
}

/// A game-shaped structure on `n` vertices: every vertex heads one edge
/// over itself plus up to `max_extra` distinct other vertices. Colors are
/// pooled per arity (two pool slots), so distinct vertices share colors —
/// and therefore utility tables — while arities stay consistent.
pub fn random_game_hypergraph(rng: &mut impl Rng, n: usize, max_extra: usize) -> GameHypergraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(n);
    for v in 0..n {
        let extra = rng.gen_range(0..=max_extra.min(n.saturating_sub(1)));
        let mut others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        others.shuffle(rng);
        let mut tuple = vec![names[v].clone()];
        tuple.extend(others[..extra].iter().map(|&u| names[u].clone()));
        let color = format!("c{}_{}", extra + 1, rng.gen_range(0..2u8));
        edges.push((tuple, color));
    }
    GameHypergraph::new(ColoredHypergraph::new(names, edges).expect("heads are distinct"))
        .expect("every vertex heads exactly one edge")
}

/// Fills a structure with random utility tables at `m` actions per player.
pub fn random_chg(
    rng: &mut impl Rng,
    structure: GameHypergraph,
    m: usize,
) -> ColoredHypergraphicalGame {
    let mut tables = std::collections::BTreeMap::new();
    for color in structure.hypergraph().colors() {
        let r = structure.hypergraph().arity_of(color).expect("color is in use");
        let size = (m as u64).pow(r as u32) as usize;
        tables.insert(color.to_string(), (0..size).map(|_| random_rational(rng)).collect());
    }
    ColoredHypergraphicalGame::new(structure, m, tables).expect("tables match the structure")
}

/// A general colored hypergraph (tuple entries may repeat) with up to
/// `edge_count` distinct edges over a pool of (color, arity) pairs. Each
/// color keeps one arity, as the game model requires.
pub fn random_colored_hypergraph(
    rng: &mut impl Rng,
    n: usize,
    edge_count: usize,
    colors: &[(String, usize)],
) -> ColoredHypergraph {
    let names: Vec<String> = (0..n).map(|i| format!("h{i}")).collect();
    let mut seen: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    if n > 0 && !colors.is_empty() {
        for _ in 0..edge_count {
            let c = rng.gen_range(0..colors.len());
            let tuple: Vec<usize> = (0..colors[c].1).map(|_| rng.gen_range(0..n)).collect();
            seen.insert((tuple, c));
        }
    }
    let edges = seen
        .into_iter()
        .map(|(tuple, c)| {
            (tuple.into_iter().map(|v| names[v].clone()).collect(), colors[c].0.clone())
        })
        .collect();
    ColoredHypergraph::new(names, edges).expect("deduplicated edges are valid")
}

/// A random homomorphism instance over a two-color pool (one binary color,
/// one unary or ternary): left side up to `max_left` vertices, right side
/// up to `max_right`.
pub fn random_hom_instance(rng: &mut impl Rng, max_left: usize, max_right: usize) -> HomInstance {
    let colors = vec![
        ("p".to_string(), 2),
        ("q".to_string(), if rng.gen_bool(0.5) { 1 } else { 3 }),
    ];
    let ln = rng.gen_range(1..=max_left);
    let rn = rng.gen_range(1..=max_right);
    let left_edges = rng.gen_range(1..=2 * ln);
    let right_edges = rng.gen_range(1..=3 * rn);
    let left = random_colored_hypergraph(rng, ln, left_edges, &colors);
    let right = random_colored_hypergraph(rng, rn, right_edges, &colors);
    HomInstance { left, right }
}

/// A uniformly attached random tree (each vertex picks an earlier parent).
pub fn random_tree(rng: &mut impl Rng, n: usize) -> UndirectedGraph {
    let names: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let p = rng.gen_range(0..i);
        edges.push((names[p].clone(), names[i].clone()));
    }
    UndirectedGraph::new(names, edges).expect("tree edges are simple")
}

/// The watcher family structure of [`example15`] filled with random tables
/// at `actions` actions per player.
pub fn example15_game(
    rng: &mut impl Rng,
    m: usize,
    actions: usize,
) -> Result<ColoredHypergraphicalGame> {
    let structure = example15(m)?;
    if actions == 0 {
        return Err(crate::error::Error::Precondition(
            "players need at least one action".into(),
        ));
    }
    Ok(random_chg(rng, structure, actions))
}
