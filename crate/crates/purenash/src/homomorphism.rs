//! Homomorphisms of colored hypergraphs: a mapping of left vertices to
//! right vertices such that every left edge lands, in tuple order, on a
//! right edge of the same color. Provides a capped brute-force search, a
//! tree-decomposition dynamic program, homomorphic equivalence, and cores.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graphs::{primal_graph, ColoredHypergraph, Hyperedge};
use crate::treewidth::{clique_in_some_bag, validate_decomposition, TreeDecomposition};

/// A homomorphism problem: does `left` map into `right`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomInstance {
    pub left: ColoredHypergraph,
    pub right: ColoredHypergraph,
}

/// A total mapping from left vertex indices to right vertex indices.
pub type VertexMapping = Vec<usize>;

/// Right-hand edge lookup keyed by color.
struct RightIndex {
    by_color: HashMap<String, HashSet<Vec<usize>>>,
}

impl RightIndex {
    fn new(right: &ColoredHypergraph) -> Self {
        let mut by_color: HashMap<String, HashSet<Vec<usize>>> = HashMap::new();
        for e in right.edges() {
            by_color.entry(e.color.clone()).or_default().insert(e.tuple.clone());
        }
        RightIndex { by_color }
    }

    fn has(&self, color: &str, tuple: &[usize]) -> bool {
        self.by_color.get(color).is_some_and(|set| set.contains(tuple))
    }
}

/// Whether `mapping` is a homomorphism of `instance`.
pub fn check_homomorphism(instance: &HomInstance, mapping: &[usize]) -> bool {
    let (left, right) = (&instance.left, &instance.right);
    if mapping.len() != left.vertex_count() || mapping.iter().any(|&x| x >= right.vertex_count()) {
        return false;
    }
    let ridx = RightIndex::new(right);
    left.edges().iter().all(|e| {
        let image: Vec<usize> = e.tuple.iter().map(|&v| mapping[v]).collect();
        ridx.has(&e.color, &image)
    })
}

/// Backtracking search assigning left vertices in index order and trying
/// right vertices in index order; an edge is checked as soon as its last
/// vertex is assigned. Returns the lexicographically first homomorphism.
fn search(left: &ColoredHypergraph, right: &ColoredHypergraph) -> Option<VertexMapping> {
    let ln = left.vertex_count();
    let rn = right.vertex_count();
    if ln == 0 {
        return Some(Vec::new());
    }
    if rn == 0 {
        return None;
    }
    let ridx = RightIndex::new(right);
    // A left color with no same-arity right edges can never be matched.
    for e in left.edges() {
        let matchable = ridx
            .by_color
            .get(&e.color)
            .is_some_and(|set| set.iter().any(|t| t.len() == e.tuple.len()));
        if !matchable {
            return None;
        }
    }
    let mut edges_by_last: Vec<Vec<&Hyperedge>> = vec![Vec::new(); ln];
    for e in left.edges() {
        let last = *e.tuple.iter().max().expect("tuples are nonempty");
        edges_by_last[last].push(e);
    }
    fn dfs(
        pos: usize,
        assign: &mut Vec<usize>,
        rn: usize,
        edges_by_last: &[Vec<&Hyperedge>],
        ridx: &RightIndex,
    ) -> bool {
        if pos == assign.len() {
            return true;
        }
        for cand in 0..rn {
            assign[pos] = cand;
            let ok = edges_by_last[pos].iter().all(|e| {
                let image: Vec<usize> = e.tuple.iter().map(|&v| assign[v]).collect();
                ridx.has(&e.color, &image)
            });
            if ok && dfs(pos + 1, assign, rn, edges_by_last, ridx) {
                return true;
            }
        }
        false
    }
    let mut assign = vec![0usize; ln];
    dfs(0, &mut assign, rn, &edges_by_last, &ridx).then_some(assign)
}

/// Default mapping-space cap for [`brute_force_hom`].
pub const DEFAULT_HOM_CAP: u64 = 10_000_000;

fn mapping_space(instance: &HomInstance) -> Option<u128> {
    let rn = instance.right.vertex_count() as u128;
    let ln = instance.left.vertex_count();
    u32::try_from(ln).ok().and_then(|ln| rn.checked_pow(ln))
}

/// Exhaustive homomorphism search, refused when the mapping space
/// |V(right)|^|V(left)| exceeds `cap`. Returns the lexicographically first
/// homomorphism (left vertices in index order) or `None`.
pub fn brute_force_hom(instance: &HomInstance, cap: u64) -> Result<Option<VertexMapping>> {
    let needed = mapping_space(instance);
    if needed.is_none_or(|x| x > cap as u128) {
        return Err(Error::CapExceeded {
            stage: "brute-force homomorphism search",
            needed: needed.map_or_else(
                || {
                    format!(
                        "{}^{}",
                        instance.right.vertex_count(),
                        instance.left.vertex_count()
                    )
                },
                |x| x.to_string(),
            ),
            cap: cap.to_string(),
        });
    }
    Ok(search(&instance.left, &instance.right))
}

/// Whether homomorphisms exist in both directions. Both searches are
/// capped like [`brute_force_hom`].
pub fn homomorphically_equivalent(
    a: &ColoredHypergraph,
    b: &ColoredHypergraph,
    cap: u64,
) -> Result<bool> {
    let forward = brute_force_hom(&HomInstance { left: a.clone(), right: b.clone() }, cap)?;
    if forward.is_none() {
        return Ok(false);
    }
    let backward = brute_force_hom(&HomInstance { left: b.clone(), right: a.clone() }, cap)?;
    Ok(backward.is_some())
}

fn enumerate_bag_table(
    bag: &[usize],
    rn: usize,
    routed: &[&Hyperedge],
    positions: &HashMap<usize, usize>,
    ridx: &RightIndex,
    parallel: bool,
) -> Result<Vec<Vec<usize>>> {
    let size = (rn as u64)
        .checked_pow(bag.len() as u32)
        .ok_or(Error::CapExceeded {
            stage: "tree-dp bag table",
            needed: format!("{rn}^{}", bag.len()),
            cap: u64::MAX.to_string(),
        })?;
    let decode = |mut k: u64| -> Vec<usize> {
        let mut row = vec![0usize; bag.len()];
        for slot in (0..bag.len()).rev() {
            row[slot] = (k % rn as u64) as usize;
            k /= rn as u64;
        }
        row
    };
    let admit = |row: &Vec<usize>| -> bool {
        routed.iter().all(|e| {
            let image: Vec<usize> = e.tuple.iter().map(|&v| row[positions[&v]]).collect();
            ridx.has(&e.color, &image)
        })
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return Ok((0..size)
            .into_par_iter()
            .map(decode)
            .filter(admit)
            .collect());
    }
    let _ = parallel;
    Ok((0..size).map(decode).filter(|r| admit(r)).collect())
}

fn dp_hom_impl(
    instance: &HomInstance,
    td: &TreeDecomposition,
    parallel: bool,
) -> Result<Option<VertexMapping>> {
    let left = &instance.left;
    let right = &instance.right;
    let primal = primal_graph(left);
    if let Err(violation) = validate_decomposition(&primal, td) {
        return Err(Error::Precondition(format!(
            "not a tree decomposition of the left structure's primal graph: {violation}"
        )));
    }
    let nodes = td.bags().len();
    // Every edge's vertex set is a primal clique, so some bag contains it.
    let mut routed: Vec<Vec<&Hyperedge>> = vec![Vec::new(); nodes];
    for e in left.edges() {
        let mut set: Vec<usize> = e.tuple.clone();
        set.sort_unstable();
        set.dedup();
        let node = clique_in_some_bag(td, &set)
            .expect("a valid decomposition covers every hyperedge clique");
        routed[node].push(e);
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for &(a, b) in td.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    // Iterative DFS from bag 0 for a deterministic post-order.
    let mut parent = vec![usize::MAX; nodes];
    let mut post = Vec::with_capacity(nodes);
    let mut stack = vec![(0usize, false)];
    let mut visited = vec![false; nodes];
    while let Some((u, expanded)) = stack.pop() {
        if expanded {
            post.push(u);
            continue;
        }
        visited[u] = true;
        stack.push((u, true));
        for &w in adj[u].iter().rev() {
            if !visited[w] {
                parent[w] = u;
                stack.push((w, false));
            }
        }
    }

    let rn = right.vertex_count();
    let ridx = RightIndex::new(right);
    let positions: Vec<HashMap<usize, usize>> = td
        .bags()
        .iter()
        .map(|bag| bag.iter().enumerate().map(|(slot, &v)| (v, slot)).collect())
        .collect();
    if left.vertex_count() > 0 && rn == 0 {
        return Ok(None);
    }

    let mut tables: Vec<Vec<Vec<usize>>> = vec![Vec::new(); nodes];
    for &u in &post {
        let mut table =
            enumerate_bag_table(&td.bags()[u], rn, &routed[u], &positions[u], &ridx, parallel)?;
        for &c in &adj[u] {
            if parent[c] != u {
                continue;
            }
            let shared: Vec<usize> = td.bags()[u]
                .iter()
                .copied()
                .filter(|v| positions[c].contains_key(v))
                .collect();
            let child_slots: Vec<usize> = shared.iter().map(|v| positions[c][v]).collect();
            let own_slots: Vec<usize> = shared.iter().map(|v| positions[u][v]).collect();
            let seen: HashSet<Vec<usize>> = tables[c]
                .iter()
                .map(|row| child_slots.iter().map(|&s| row[s]).collect())
                .collect();
            table.retain(|row| {
                let proj: Vec<usize> = own_slots.iter().map(|&s| row[s]).collect();
                seen.contains(&proj)
            });
        }
        tables[u] = table;
    }

    if tables[0].is_empty() {
        return Ok(None);
    }
    // Top-down: fix the first root row, then the first compatible row of
    // each child; the running-intersection property makes this globally
    // consistent.
    let mut chosen: Vec<Option<Vec<usize>>> = vec![None; nodes];
    chosen[0] = Some(tables[0][0].clone());
    for &u in post.iter().rev() {
        let row = chosen[u].clone().expect("parents are decided before children");
        for &c in &adj[u] {
            if parent[c] != u {
                continue;
            }
            let shared: Vec<usize> = td.bags()[u]
                .iter()
                .copied()
                .filter(|v| positions[c].contains_key(v))
                .collect();
            let pick = tables[c]
                .iter()
                .find(|cand| {
                    shared
                        .iter()
                        .all(|v| cand[positions[c][v]] == row[positions[u][v]])
                })
                .expect("bottom-up filtering kept only extendable rows");
            chosen[c] = Some(pick.clone());
        }
    }
    let mut mapping = vec![usize::MAX; left.vertex_count()];
    for u in 0..nodes {
        let row = chosen[u].as_ref().expect("tree search visits every bag");
        for (&v, &slot) in &positions[u] {
            mapping[v] = row[slot];
        }
    }
    debug_assert!(check_homomorphism(instance, &mapping));
    Ok(Some(mapping))
}

/// Decides the instance by dynamic programming over a tree decomposition of
/// the left structure's primal graph (which `td` must be valid for), in
/// O(bags · |V(right)|^(width+1)) table work. Returns a witness mapping on
/// success, chosen deterministically.
#[cfg(feature = "parallel")]
pub fn dp_hom(instance: &HomInstance, td: &TreeDecomposition) -> Result<Option<VertexMapping>> {
    dp_hom_impl(instance, td, true)
}

/// Decides the instance by dynamic programming (single-threaded build).
#[cfg(not(feature = "parallel"))]
pub fn dp_hom(instance: &HomInstance, td: &TreeDecomposition) -> Result<Option<VertexMapping>> {
    dp_hom_impl(instance, td, false)
}

/// Single-threaded variant of [`dp_hom`]; same result. Kept public so
/// benchmarks can compare the two paths.
pub fn dp_hom_serial(instance: &HomInstance, td: &TreeDecomposition) -> Result<Option<VertexMapping>> {
    dp_hom_impl(instance, td, false)
}

/// Default vertex cap for [`core`].
pub const DEFAULT_CORE_CAP: usize = 8;

/// A core: the minimal induced substructure the whole structure retracts
/// onto.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// The core itself.
    pub core: ColoredHypergraph,
    /// Original index of each core vertex (ascending).
    pub vertex_set: Vec<usize>,
    /// A retraction: maps each original vertex to a core vertex index.
    pub retraction: VertexMapping,
}

/// Advances `subset` to the next k-combination of 0..n in lexicographic
/// order; `false` once exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Computes the core by searching induced substructures in order of size
/// (then lexicographically by vertex set) for the first one the structure
/// retracts onto. Deterministic; exponential, hence capped at `cap`
/// vertices.
pub fn core(h: &ColoredHypergraph, cap: usize) -> Result<CoreResult> {
    let n = h.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded {
            stage: "core search",
            needed: n.to_string(),
            cap: cap.to_string(),
        });
    }
    let full_colors: HashSet<&str> = h.edges().iter().map(|e| e.color.as_str()).collect();
    for size in 0..=n {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let sub = h.induced(&subset);
            let sub_colors: HashSet<&str> = sub.edges().iter().map(|e| e.color.as_str()).collect();
            // A retraction must hit every color, so skip color-deficient
            // subsets without searching.
            if sub_colors.len() == full_colors.len() {
                if let Some(retraction) = search(h, &sub) {
                    return Ok(CoreResult { core: sub, vertex_set: subset, retraction });
                }
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    unreachable!("the full vertex set always retracts via the identity")
}

/// An upper bound on the least treewidth among structures homomorphically
/// equivalent to `h`: the exact treewidth of the core's primal graph.
pub fn core_treewidth(h: &ColoredHypergraph, core_cap: usize, tw_cap: usize) -> Result<(i64, CoreResult)> {
    let c = core(h, core_cap)?;
    let (width, _) = crate::treewidth::exact_treewidth(&primal_graph(&c.core), tw_cap)?;
    Ok((width, c))
}
