//! Tree decompositions: validation, a min-fill heuristic, elimination-order
//! construction, and an exact treewidth oracle for small graphs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::graphs::UndirectedGraph;

/// A tree decomposition of an undirected graph: bags of vertex indices plus
/// tree edges between bag indices. Constructors canonicalize (bags sorted
/// and deduplicated, edges normalized to (min, max) and sorted); whether
/// the result really is a valid decomposition of a given graph is checked
/// separately by [`validate_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        TreeDecomposition { bags, edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Largest bag size minus one; −1 if every bag is empty.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }
}

/// The first condition a candidate decomposition violates, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionViolation {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("bag {bag} contains vertex index {index}, but the graph has {limit} vertices")]
    UnknownVertexInBag { bag: usize, index: usize, limit: usize },
    #[error("vertex {vertex:?} appears in no bag")]
    VertexNotCovered { vertex: String },
    #[error("edge ({u:?}, {v:?}) is contained in no bag")]
    EdgeNotCovered { u: String, v: String },
    #[error("the bags containing vertex {vertex:?} do not form a connected subtree")]
    RunningIntersectionBroken { vertex: String },
}

/// Checks the three decomposition conditions (plus tree-ness of the bag
/// graph) in a fixed order and reports the first violation.
pub fn validate_decomposition(
    g: &UndirectedGraph,
    td: &TreeDecomposition,
) -> std::result::Result<(), DecompositionViolation> {
    let nodes = td.bags().len();
    if nodes == 0 {
        return Err(DecompositionViolation::NotATree("no bags".into()));
    }
    let mut seen = BTreeSet::new();
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in td.edges() {
        if a >= nodes || b >= nodes {
            return Err(DecompositionViolation::NotATree(format!(
                "edge ({a}, {b}) references a missing bag"
            )));
        }
        if a == b {
            return Err(DecompositionViolation::NotATree(format!("self-loop at bag {a}")));
        }
        if !seen.insert((a, b)) {
            return Err(DecompositionViolation::NotATree(format!("duplicate edge ({a}, {b})")));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if td.edges().len() != nodes - 1 {
        return Err(DecompositionViolation::NotATree(format!(
            "{nodes} bags need {} edges, found {}",
            nodes - 1,
            td.edges().len()
        )));
    }
    let mut reached = vec![false; nodes];
    let mut queue = vec![0usize];
    reached[0] = true;
    while let Some(x) = queue.pop() {
        for &y in &adj[x] {
            if !reached[y] {
                reached[y] = true;
                queue.push(y);
            }
        }
    }
    if let Some(lost) = reached.iter().position(|&r| !r) {
        return Err(DecompositionViolation::NotATree(format!("bag {lost} is disconnected")));
    }

    let n = g.vertex_count();
    for (i, bag) in td.bags().iter().enumerate() {
        if let Some(&bad) = bag.iter().find(|&&v| v >= n) {
            return Err(DecompositionViolation::UnknownVertexInBag { bag: i, index: bad, limit: n });
        }
    }
    let mut in_bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags().iter().enumerate() {
        for &v in bag {
            in_bags[v].push(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| in_bags[v].is_empty()) {
        return Err(DecompositionViolation::VertexNotCovered { vertex: g.id(v).to_string() });
    }
    for &(u, v) in g.edges() {
        let covered = td
            .bags()
            .iter()
            .any(|bag| bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok());
        if !covered {
            return Err(DecompositionViolation::EdgeNotCovered {
                u: g.id(u).to_string(),
                v: g.id(v).to_string(),
            });
        }
    }
    for (v, bags_of_v) in in_bags.iter().enumerate() {
        let holding: BTreeSet<usize> = bags_of_v.iter().copied().collect();
        let mut reached = BTreeSet::new();
        let mut queue = vec![bags_of_v[0]];
        reached.insert(bags_of_v[0]);
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if holding.contains(&y) && reached.insert(y) {
                    queue.push(y);
                }
            }
        }
        if reached.len() != holding.len() {
            return Err(DecompositionViolation::RunningIntersectionBroken {
                vertex: g.id(v).to_string(),
            });
        }
    }
    Ok(())
}

/// First bag (in index order) containing every vertex of `set`, if any. For
/// a valid decomposition this always succeeds when `set` is a clique of the
/// graph, which is how hyperedge constraints get routed to bags.
pub fn clique_in_some_bag(td: &TreeDecomposition, set: &[usize]) -> Option<usize> {
    td.bags()
        .iter()
        .position(|bag| set.iter().all(|v| bag.binary_search(v).is_ok()))
}

/// Builds the decomposition defined by an elimination order: eliminating a
/// vertex bags it with its current (fill-extended) neighborhood, and the
/// bag hangs off the bag of its earliest-eliminated neighbor.
pub fn decomposition_from_order(g: &UndirectedGraph, order: &[usize]) -> Result<TreeDecomposition> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(TreeDecomposition::new(vec![Vec::new()], Vec::new()));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::Precondition(format!(
                "elimination order is not a permutation of 0..{n}"
            )));
        }
        position[v] = i;
    }
    if order.len() != n {
        return Err(Error::Precondition(format!(
            "elimination order has {} entries for {n} vertices",
            order.len()
        )));
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = vec![v];
        bag.extend_from_slice(&nbrs);
        bags.push(bag);
        match nbrs.iter().min_by_key(|&&u| position[u]) {
            Some(&u) => edges.push((i, position[u])),
            None => roots.push(i),
        }
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
    }
    // Each component's elimination finishes at a neighborless vertex; chain
    // those root bags so the result is one tree.
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    Ok(TreeDecomposition::new(bags, edges))
}

/// Min-fill elimination order: repeatedly eliminate the vertex whose
/// neighborhood needs the fewest fill edges to become a clique, breaking
/// ties toward the smallest vertex index.
fn min_fill_order(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None; // (fill, vertex)
        for v in (0..n).filter(|&v| alive[v]) {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    if !adj[a].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if best.is_none_or(|(bf, _)| fill < bf) {
                best = Some((fill, v));
            }
        }
        let (_, v) = best.expect("an alive vertex exists");
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &u in &nbrs {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Min-fill heuristic decomposition. Always valid; its width is an upper
/// bound on the treewidth (tight on trees, cliques, and cycles).
pub fn heuristic_decomposition(g: &UndirectedGraph) -> TreeDecomposition {
    decomposition_from_order(g, &min_fill_order(g))
        .expect("min-fill emits a permutation")
}

/// Hard ceiling for [`exact_treewidth`]: beyond this the state table
/// (2^n entries) stops fitting in memory.
pub const EXACT_TREEWIDTH_CEILING: usize = 24;

/// Default vertex cap for [`exact_treewidth`].
pub const DEFAULT_EXACT_TREEWIDTH_CAP: usize = 14;

/// Exact treewidth by dynamic programming over elimination orders:
/// `best(S)` is the smallest possible maximum elimination degree over all
/// orders that eliminate exactly the set `S` first, where the degree of a
/// vertex counts fill neighbors reached through already-eliminated
/// vertices. Returns the width and an optimal decomposition.
///
/// Exponential in the vertex count, so instances above `cap` (or the hard
/// ceiling of 24) are refused.
pub fn exact_treewidth(g: &UndirectedGraph, cap: usize) -> Result<(i64, TreeDecomposition)> {
    let n = g.vertex_count();
    let effective = cap.min(EXACT_TREEWIDTH_CEILING);
    if n > effective {
        return Err(Error::CapExceeded {
            stage: "exact treewidth",
            needed: n.to_string(),
            cap: effective.to_string(),
        });
    }
    if n == 0 {
        return Ok((-1, TreeDecomposition::new(vec![Vec::new()], Vec::new())));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let full: u32 = (1u32 << n) - 1;

    // Degree of `v` once `eliminated` is gone: neighbors reachable from `v`
    // through eliminated vertices only.
    let fill_degree = |eliminated: u32, v: usize| -> i8 {
        let mut seen = 1u32 << v;
        let mut outside = 0u32;
        let mut frontier = masks[v];
        while frontier & !seen != 0 {
            let fresh = frontier & !seen;
            seen |= fresh;
            outside |= fresh & !eliminated;
            let mut expand = fresh & eliminated;
            frontier = 0;
            while expand != 0 {
                let u = expand.trailing_zeros() as usize;
                expand &= expand - 1;
                frontier |= masks[u];
            }
        }
        outside.count_ones() as i8
    };

    let mut best = vec![i8::MAX; (full as usize) + 1];
    let mut last_choice = vec![0u8; (full as usize) + 1];
    best[0] = -1;
    for s in 1..=full {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1 << v);
            let candidate = best[prev as usize].max(fill_degree(prev, v));
            if candidate < best[s as usize] {
                best[s as usize] = candidate;
                last_choice[s as usize] = v as u8;
            }
        }
    }
    let width = best[full as usize] as i64;
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last_choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(g, &order).expect("reconstruction emits a permutation");
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}
