//! Constructions going the other way: games whose pure equilibria encode a
//! given homomorphism instance, plus no-equilibrium primitives and a family
//! of structures whose core is much smaller than the structure itself.
//!
//! All utility tables here are deterministic: ties and arbitrary choices
//! (like which cycle carries the Matching Pennies payoffs) are fixed by
//! vertex-id order, so rebuilding a gadget reproduces it bit for bit.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::BigRational;

use crate::error::{Error, Result};
use crate::games::{rat, ColoredHypergraphicalGame, GraphicalGame};
use crate::graphs::{
    induced_digraph, is_irreducible, scc, ColoredHypergraph, Digraph, GameHypergraph,
};

/// Largest utility table a gadget constructor is willing to materialize.
pub const GADGET_TABLE_CAP: u64 = 10_000_000;

fn table_len(actions: usize, arity: usize) -> Result<usize> {
    let needed = (actions as u64)
        .checked_pow(arity as u32)
        .filter(|&s| s <= GADGET_TABLE_CAP)
        .ok_or_else(|| Error::CapExceeded {
            stage: "gadget utility table",
            needed: format!("{actions}^{arity} entries"),
            cap: GADGET_TABLE_CAP.to_string(),
        })?;
    Ok(needed as usize)
}

/// Hyperedge tuples of `h`, grouped by color, for O(1) "is this an edge of
/// color c" checks.
fn edges_by_color(h: &ColoredHypergraph) -> HashMap<&str, HashSet<&[usize]>> {
    let mut map: HashMap<&str, HashSet<&[usize]>> = HashMap::new();
    for e in h.edges() {
        map.entry(e.color.as_str()).or_default().insert(e.tuple.as_slice());
    }
    map
}

/// The role a player takes in the Matching Pennies cycle of its terminal
/// component: it watches `pred` and either imitates or (for the cycle
/// anchor) anti-imitates its failure action.
struct CycleRole {
    pred: usize,
    anti: bool,
}

/// A shortest cycle through `anchor` inside one strongly connected
/// component: BFS forward from the anchor, then close through the nearest
/// in-neighbor (ties to the smallest vertex id). Returns the cycle as a
/// vertex list in arc order, starting at the anchor.
fn shortest_cycle_through(g: &Digraph, anchor: usize, component: &[usize]) -> Vec<usize> {
    let members: HashSet<usize> = component.iter().copied().collect();
    let mut dist: HashMap<usize, usize> = HashMap::new();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    dist.insert(anchor, 0);
    let mut queue = std::collections::VecDeque::from([anchor]);
    while let Some(u) = queue.pop_front() {
        for &w in g.out_neighbors(u) {
            if members.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w, dist[&u] + 1);
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    let mut best: Option<usize> = None;
    for &w in g.in_neighbors(anchor) {
        if !members.contains(&w) {
            continue;
        }
        if let Some(&d) = dist.get(&w) {
            if best.is_none_or(|b| d < dist[&b]) {
                best = Some(w);
            }
        }
    }
    let mut v = best.expect("a terminal component of an irreducible digraph lies on a cycle");
    let mut path = vec![v];
    while v != anchor {
        v = parent[&v];
        path.push(v);
    }
    path.reverse();
    path
}

/// Builds a graphical game on the irreducible digraph `g` that has a pure
/// equilibrium exactly when `g`'s induced hypergraph maps homomorphically
/// into `h`.
///
/// Every player's actions are `h`'s vertices plus two failure actions `T`
/// and `B`. A local profile matching an `h`-edge whose color is the
/// player's own id pays 100; playing a non-failure action otherwise pays
/// −100; on one fixed short cycle per terminal component the failure
/// actions play Matching Pennies (±1, the anchor anti-imitating its
/// predecessor, everyone else imitating); all other failure play pays 0.
pub fn hom_to_gg(g: &Digraph, h: &ColoredHypergraph) -> Result<GraphicalGame> {
    if g.vertex_count() == 0 {
        return Err(Error::Precondition("the game graph must be nonempty".into()));
    }
    if !is_irreducible(g) {
        return Err(Error::Precondition(
            "the game graph must be irreducible; remove iterated sinks first".into(),
        ));
    }
    if h.vertex_ids().iter().any(|id| id == "T" || id == "B") {
        return Err(Error::Precondition(
            "right-side vertices named \"T\" or \"B\" collide with the failure actions; rename \
             them"
                .into(),
        ));
    }
    let hv = h.vertex_count();
    let s = hv + 2;

    let mut roles: HashMap<usize, CycleRole> = HashMap::new();
    let parts = scc(g);
    for c in parts.terminal_components() {
        let component = &parts.components()[c];
        let cycle = shortest_cycle_through(g, component[0], component);
        for (k, &v) in cycle.iter().enumerate() {
            let pred = if k == 0 { *cycle.last().unwrap() } else { cycle[k - 1] };
            roles.insert(v, CycleRole { pred, anti: k == 0 });
        }
    }

    let mut labels: Vec<String> = h.vertex_ids().to_vec();
    labels.push("T".to_string());
    labels.push("B".to_string());
    let h_edges = edges_by_color(h);
    let n = g.vertex_count();
    let mut tables = Vec::with_capacity(n);
    for i in 0..n {
        let tail = g.in_neighbors(i);
        let color_edges = h_edges.get(g.id(i));
        let role = roles.get(&i);
        let pred_slot = role.map(|r| {
            tail.iter().position(|&v| v == r.pred).expect("cycle predecessors are in-neighbors")
        });
        let mut table = Vec::with_capacity(table_len(s, tail.len() + 1)?);
        let mut args = vec![0usize; tail.len() + 1];
        loop {
            let own = args[0];
            let matches = own < hv
                && args[1..].iter().all(|&a| a < hv)
                && color_edges.is_some_and(|set| set.contains(args.as_slice()));
            let u = if matches {
                rat(100, 1)
            } else if own < hv {
                rat(-100, 1)
            } else if let (Some(role), Some(slot)) = (role, pred_slot) {
                let pa = args[1 + slot];
                if pa < hv {
                    rat(0, 1)
                } else if (pa == own) != role.anti {
                    rat(1, 1)
                } else {
                    rat(-1, 1)
                }
            } else {
                rat(0, 1)
            };
            table.push(u);
            let mut slot = args.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                args[slot] += 1;
                if args[slot] < s {
                    break;
                }
                args[slot] = 0;
            }
            if slot == 0 && args[0] == 0 {
                break;
            }
        }
        tables.push(table);
    }
    let actions = vec![labels; n];
    GraphicalGame::new(g.clone(), actions, tables)
}

/// A directed n-cycle where every player wants to play one more (mod p)
/// than its predecessor: a single color, actions `0..p-1`, payoff 1 for the
/// unique best response and 0 otherwise. Has no pure equilibrium whenever
/// p ≥ n+1; smaller p can admit one.
pub fn cycle_game(n: usize, p: usize) -> Result<ColoredHypergraphicalGame> {
    if n < 2 {
        return Err(Error::Precondition("the cycle needs at least two players".into()));
    }
    if p < 2 {
        return Err(Error::Precondition("each player needs at least two actions".into()));
    }
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(Vec<String>, String)> = (0..n)
        .map(|i| (vec![names[i].clone(), names[(i + n - 1) % n].clone()], "c".to_string()))
        .collect();
    let structure = GameHypergraph::new(ColoredHypergraph::new(names, edges)?)?;
    let mut table = Vec::with_capacity(table_len(p, 2)?);
    for own in 0..p {
        for pred in 0..p {
            table.push(if own == (pred + 1) % p { rat(1, 1) } else { rat(0, 1) });
        }
    }
    let mut tables = BTreeMap::new();
    tables.insert("c".to_string(), table);
    ColoredHypergraphicalGame::new(structure, p, tables)
}

/// A colored hypergraphical game with no pure equilibrium on any strongly
/// connected digraph (n ≥ 2): actions `0..n`, best response one more (mod
/// n+1) than the largest neighbor action. One color per in-degree — the
/// payoff is symmetric in the neighbors, so same-arity players can share a
/// table.
pub fn strongly_connected_game(g: &Digraph) -> Result<ColoredHypergraphicalGame> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    if scc(g).components().len() != 1 {
        return Err(Error::Precondition("the digraph must be strongly connected".into()));
    }
    let m = n + 1;
    let mut edges = Vec::with_capacity(n);
    for v in 0..n {
        let mut tuple = vec![g.id(v).to_string()];
        tuple.extend(g.in_neighbors(v).iter().map(|&u| g.id(u).to_string()));
        edges.push((tuple, format!("deg{}", g.in_neighbors(v).len())));
    }
    let structure =
        GameHypergraph::new(ColoredHypergraph::new(g.vertex_ids().to_vec(), edges)?)?;
    let arities: std::collections::BTreeSet<usize> =
        (0..n).map(|v| g.in_neighbors(v).len() + 1).collect();
    let mut tables = BTreeMap::new();
    for r in arities {
        let mut table = Vec::with_capacity(table_len(m, r)?);
        let mut args = vec![0usize; r];
        loop {
            let best = (args[1..].iter().max().copied().unwrap_or(0) + 1) % m;
            table.push(if args[0] == best { rat(1, 1) } else { rat(0, 1) });
            let mut slot = args.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                args[slot] += 1;
                if args[slot] < m {
                    break;
                }
                args[slot] = 0;
            }
            if slot == 0 && args[0] == 0 {
                break;
            }
        }
        tables.insert(format!("deg{}", r - 1), table);
    }
    ColoredHypergraphicalGame::new(structure, m, tables)
}

/// Builds a colored hypergraphical game on the irreducible structure `g`
/// that has a pure equilibrium exactly when `g` maps homomorphically into
/// `h`. Unlike [`hom_to_gg`], the utilities only depend on colors, never on
/// player identity.
///
/// Actions are `h`'s vertices followed by failure actions 1..2n+1 (n =
/// number of players). A tuple matching an `h`-edge of the same color pays
/// 100. Otherwise: with no neighbor failing, failure action 1 pays +1 and
/// everything else −100; with neighbors failing at worst f, the single
/// best response is failure f+1, wrapping from 2n+1 back to n+1.
pub fn hom_to_chg(
    g: &GameHypergraph,
    h: &ColoredHypergraph,
) -> Result<ColoredHypergraphicalGame> {
    let digraph = induced_digraph(g);
    if !is_irreducible(&digraph) {
        return Err(Error::Precondition(
            "the game structure must be irreducible; remove iterated sinks first".into(),
        ));
    }
    let n = g.hypergraph().vertex_count();
    let hv = h.vertex_count();
    let m = hv + 2 * n + 1;
    let h_edges = edges_by_color(h);
    let mut tables = BTreeMap::new();
    for color in g.hypergraph().colors() {
        let r = g.hypergraph().arity_of(color).expect("color is in use");
        let color_edges = h_edges.get(color);
        let mut table = Vec::with_capacity(table_len(m, r)?);
        let mut args = vec![0usize; r];
        loop {
            let own = args[0];
            let matches = args.iter().all(|&a| a < hv)
                && color_edges.is_some_and(|set| set.contains(args.as_slice()));
            let u = if matches {
                rat(100, 1)
            } else {
                // Failure action f occupies index hv + f - 1.
                let f_max = args[1..].iter().filter(|&&a| a >= hv).map(|&a| a - hv + 1).max();
                match f_max {
                    None => {
                        if own == hv {
                            rat(1, 1)
                        } else {
                            rat(-100, 1)
                        }
                    }
                    Some(f_max) => {
                        let best = if f_max < 2 * n + 1 { f_max + 1 } else { n + 1 };
                        if own == hv + best - 1 {
                            rat(1, 1)
                        } else {
                            rat(0, 1)
                        }
                    }
                }
            };
            table.push(u);
            let mut slot = args.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                args[slot] += 1;
                if args[slot] < m {
                    break;
                }
                args[slot] = 0;
            }
            if slot == 0 && args[0] == 0 {
                break;
            }
        }
        tables.insert(color.to_string(), table);
    }
    ColoredHypergraphicalGame::new(g.clone(), m, tables)
}

/// The direct encoding of an arbitrary homomorphism instance as a graphical
/// game: every left vertex becomes a constant-utility "mapper" choosing a
/// right vertex, and every left edge e gets a watcher pair x(e), y(e) with
/// actions g/b. When the mappers' choices form a correct edge image the
/// pair settles on (g, g); otherwise they play Matching Pennies, so a pure
/// equilibrium exists exactly when a homomorphism does.
///
/// The primal treewidth of the game's induced hypergraph exceeds the left
/// side's by at most 2.
pub fn hom_to_gg_direct(g: &ColoredHypergraph, h: &ColoredHypergraph) -> Result<GraphicalGame> {
    let hv = h.vertex_count();
    if hv == 0 && g.vertex_count() > 0 {
        return Err(Error::Precondition(
            "the right side has no vertices, so mapper players would have no actions".into(),
        ));
    }
    let n_mappers = g.vertex_count();
    let mut ids: Vec<String> = g.vertex_ids().to_vec();
    let mut arcs: Vec<(String, String)> = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        let xe = format!("x(e{k})");
        let ye = format!("y(e{k})");
        let mut seen = HashSet::new();
        for &v in &e.tuple {
            if seen.insert(v) {
                arcs.push((g.id(v).to_string(), xe.clone()));
                arcs.push((g.id(v).to_string(), ye.clone()));
            }
        }
        arcs.push((ye.clone(), xe.clone()));
        arcs.push((xe.clone(), ye.clone()));
        ids.push(xe);
        ids.push(ye);
    }
    let graph = Digraph::new(ids, arcs)?;

    const G: usize = 0; // action "g"
    let h_edges = edges_by_color(h);
    let mapper_labels: Vec<String> = h.vertex_ids().to_vec();
    let watcher_labels: Vec<String> = vec!["g".to_string(), "b".to_string()];
    let mut actions: Vec<Vec<String>> = Vec::with_capacity(graph.vertex_count());
    let mut tables: Vec<Vec<BigRational>> = Vec::with_capacity(graph.vertex_count());
    for _ in 0..n_mappers {
        actions.push(mapper_labels.clone());
        tables.push(vec![rat(1, 1); hv]);
    }
    for (k, e) in g.edges().iter().enumerate() {
        let x_idx = n_mappers + 2 * k;
        let y_idx = x_idx + 1;
        let correct_edges = h_edges.get(e.color.as_str());
        for (player, partner) in [(x_idx, y_idx), (y_idx, x_idx)] {
            let tail = graph.in_neighbors(player);
            let slot_of: HashMap<usize, usize> =
                tail.iter().enumerate().map(|(slot, &v)| (v, slot)).collect();
            let counts: Vec<usize> =
                tail.iter().map(|&v| if v < n_mappers { hv } else { 2 }).collect();
            let partner_slot = slot_of[&partner];
            let mut table = Vec::with_capacity(table_len(hv.max(2), tail.len() + 1)?);
            let mut own = 0usize;
            let mut tail_args = vec![0usize; tail.len()];
            let mut image = vec![0usize; e.tuple.len()];
            loop {
                for (pos, &v) in e.tuple.iter().enumerate() {
                    image[pos] = tail_args[slot_of[&v]];
                }
                let correct = correct_edges.is_some_and(|set| set.contains(image.as_slice()));
                let partner_act = tail_args[partner_slot];
                let happy = if player == x_idx {
                    (own == G && partner_act == G) || (!correct && own != G && partner_act != G)
                } else {
                    (correct && own == G && partner_act == G) || (!correct && own != partner_act)
                };
                table.push(if happy { rat(1, 1) } else { rat(0, 1) });
                // Mixed-radix odometer: the whole scope is (own, tail).
                let mut advanced = false;
                for slot in (0..tail.len()).rev() {
                    tail_args[slot] += 1;
                    if tail_args[slot] < counts[slot] {
                        advanced = true;
                        break;
                    }
                    tail_args[slot] = 0;
                }
                if !advanced {
                    own += 1;
                    if own == 2 {
                        break;
                    }
                }
            }
            actions.push(watcher_labels.clone());
            tables.push(table);
        }
    }
    GraphicalGame::new(graph, actions, tables)
}

/// A family of structures whose full primal treewidth grows with m while
/// every member retracts onto a fixed 4-vertex fragment: m "row" vertices
/// (color L), m "column" vertices (color R), and a watcher pair x_ij, y_ij
/// (colors X and Y) for every row-column pair. Utilities are left to the
/// caller; the returned structure supports any table assignment.
pub fn example15(m: usize) -> Result<GameHypergraph> {
    if m == 0 {
        return Err(Error::Precondition("need at least one row (m >= 1)".into()));
    }
    let l = |i: usize| format!("l{i}");
    let r = |j: usize| format!("r{j}");
    let x = |i: usize, j: usize| format!("x{i}_{j}");
    let y = |i: usize, j: usize| format!("y{i}_{j}");
    let mut names: Vec<String> = Vec::with_capacity(2 * m * m + 2 * m);
    names.extend((1..=m).map(l));
    names.extend((1..=m).map(r));
    for i in 1..=m {
        names.extend((1..=m).map(|j| x(i, j)));
    }
    for i in 1..=m {
        names.extend((1..=m).map(|j| y(i, j)));
    }
    let mut edges: Vec<(Vec<String>, String)> = Vec::with_capacity(2 * m * m + 2 * m);
    edges.extend((1..=m).map(|i| (vec![l(i)], "L".to_string())));
    edges.extend((1..=m).map(|j| (vec![r(j)], "R".to_string())));
    for i in 1..=m {
        for j in 1..=m {
            edges.push((vec![x(i, j), y(i, j), l(i), r(j)], "X".to_string()));
        }
    }
    for i in 1..=m {
        for j in 1..=m {
            edges.push((vec![y(i, j), x(i, j), l(i), r(j)], "Y".to_string()));
        }
    }
    GameHypergraph::new(ColoredHypergraph::new(names, edges)?)
}
