//! Graphical games, colored hypergraphical games, and the exact-arithmetic
//! equilibrium primitives shared by both: utilities, best responses, the
//! equilibrium predicate, and a capped brute-force equilibrium scan.
//!
//! Utilities are exact rationals throughout; argmax tie sets are meaningful
//! downstream (ties become extra hyperedges in the homomorphism reduction),
//! so floating point is never used.

use std::collections::BTreeMap;

use num::BigRational;

use crate::error::{Error, Result};
use crate::graphs::{induced_digraph, ColoredHypergraph, Digraph, GameHypergraph};

/// One action index per player, in player (vertex) order.
pub type Profile = Vec<usize>;

/// Convenience constructor for exact rationals.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}

/// Common interface of graphical and colored hypergraphical games: players
/// are the vertices of a digraph, and a player's utility depends only on
/// its own action and its in-neighbors' actions.
pub trait Game {
    /// The dependence structure. Player indices are vertex indices.
    fn graph(&self) -> &Digraph;

    fn action_count(&self, player: usize) -> usize;

    /// Display label of an action (used in documents and witnesses).
    fn action_label(&self, player: usize, action: usize) -> String;

    /// Utility of `player` when it plays `own` and everyone else plays as
    /// in `profile`. Only the in-neighbor entries of `profile` are read;
    /// `profile[player]` is ignored in favor of `own`.
    fn utility(&self, player: usize, own: usize, profile: &[usize]) -> &BigRational;

    /// The sub-game on `kept` (ascending player indices). `kept` must be
    /// closed under in-neighbors; panics otherwise, since utilities of the
    /// kept players would be undefined.
    fn restricted_to(&self, kept: &[usize]) -> Self
    where
        Self: Sized;
}

pub fn player_count<G: Game>(game: &G) -> usize {
    game.graph().vertex_count()
}

/// All actions of `player` maximizing its utility against `profile`, in
/// ascending action order. Never empty.
pub fn best_responses<G: Game>(game: &G, player: usize, profile: &[usize]) -> Vec<usize> {
    let mut best = vec![0];
    let mut best_u = game.utility(player, 0, profile);
    for a in 1..game.action_count(player) {
        let u = game.utility(player, a, profile);
        if u > best_u {
            best.clear();
            best.push(a);
            best_u = u;
        } else if u == best_u {
            best.push(a);
        }
    }
    best
}

/// Whether every player plays a best response in `profile`.
pub fn is_psne<G: Game>(game: &G, profile: &[usize]) -> bool {
    (0..player_count(game)).all(|p| {
        let current = game.utility(p, profile[p], profile);
        (0..game.action_count(p)).all(|a| game.utility(p, a, profile) <= current)
    })
}

/// Number of pure profiles, or `None` on overflow.
pub fn profile_space<G: Game>(game: &G) -> Option<u64> {
    (0..player_count(game)).try_fold(1u64, |acc, p| acc.checked_mul(game.action_count(p) as u64))
}

#[cfg(feature = "parallel")]
fn decode_profile<G: Game>(game: &G, mut k: u64, out: &mut [usize]) {
    // Row-major: the last player varies fastest, so ascending k is
    // lexicographic profile order.
    for p in (0..out.len()).rev() {
        let m = game.action_count(p) as u64;
        out[p] = (k % m) as usize;
        k /= m;
    }
}

fn check_profile_cap<G: Game>(game: &G, cap: u64) -> Result<u64> {
    let needed = profile_space(game).unwrap_or(u64::MAX);
    if needed > cap {
        return Err(Error::CapExceeded {
            stage: "brute-force equilibrium scan",
            needed: needed.to_string(),
            cap: cap.to_string(),
        });
    }
    Ok(needed)
}

/// Default profile-space cap for [`brute_force_psne`].
pub const DEFAULT_PROFILE_CAP: u64 = 10_000_000;

/// Exhaustive equilibrium search: the lexicographically first pure
/// equilibrium (players in vertex order, actions in declared order), or
/// `None`. Refuses instances whose profile space exceeds `cap`.
#[cfg(feature = "parallel")]
pub fn brute_force_psne<G: Game + Sync>(game: &G, cap: u64) -> Result<Option<Profile>> {
    use rayon::prelude::*;
    let total = check_profile_cap(game, cap)?;
    let n = player_count(game);
    let found = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0usize; n],
            |buf, k| {
                decode_profile(game, k, buf);
                if is_psne(game, buf) {
                    Some(buf.clone())
                } else {
                    None
                }
            },
        )
        .find_first(Option::is_some)
        .flatten();
    Ok(found)
}

/// Exhaustive equilibrium search (single-threaded build).
#[cfg(not(feature = "parallel"))]
pub fn brute_force_psne<G: Game>(game: &G, cap: u64) -> Result<Option<Profile>> {
    brute_force_psne_serial(game, cap)
}

/// Single-threaded variant of [`brute_force_psne`]; same result, same
/// order. Kept public so benchmarks can compare the two paths.
pub fn brute_force_psne_serial<G: Game>(game: &G, cap: u64) -> Result<Option<Profile>> {
    let total = check_profile_cap(game, cap)?;
    let n = player_count(game);
    let mut profile = vec![0usize; n];
    for _ in 0..total {
        if is_psne(game, &profile) {
            return Ok(Some(profile));
        }
        for p in (0..n).rev() {
            profile[p] += 1;
            if profile[p] < game.action_count(p) {
                break;
            }
            profile[p] = 0;
        }
    }
    Ok(None)
}

/// Computes the flat table index for a scope, own action first.
fn flat_index(own: usize, scope_tail: &[usize], counts: impl Fn(usize) -> usize, profile: &[usize]) -> usize {
    let mut idx = own;
    for &v in scope_tail {
        idx = idx * counts(v) + profile[v];
    }
    idx
}

/// A game on a digraph: each player has its own action list and a dense
/// local utility table over its scope (itself first, then its in-neighbors
/// in ascending id order; the last scope member varies fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicalGame {
    graph: Digraph,
    actions: Vec<Vec<String>>,
    scopes: Vec<Vec<usize>>,
    tables: Vec<Vec<BigRational>>,
}

impl GraphicalGame {
    pub fn new(graph: Digraph, actions: Vec<Vec<String>>, tables: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = graph.vertex_count();
        if actions.len() != n {
            return Err(Error::InvalidStructure(format!(
                "{} action lists for {n} players",
                actions.len()
            )));
        }
        if tables.len() != n {
            return Err(Error::InvalidStructure(format!(
                "{} utility tables for {n} players",
                tables.len()
            )));
        }
        for (p, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(Error::InvalidStructure(format!(
                    "player {:?} has no actions",
                    graph.id(p)
                )));
            }
            let mut sorted = acts.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != acts.len() {
                return Err(Error::InvalidStructure(format!(
                    "player {:?} repeats an action label",
                    graph.id(p)
                )));
            }
        }
        let mut scopes = Vec::with_capacity(n);
        for p in 0..n {
            let mut scope = vec![p];
            scope.extend_from_slice(graph.in_neighbors(p));
            scopes.push(scope);
        }
        for (p, table) in tables.iter().enumerate() {
            let want = scopes[p]
                .iter()
                .try_fold(1usize, |acc, &v| acc.checked_mul(actions[v].len()))
                .ok_or_else(|| {
                    Error::InvalidStructure(format!("table for player {:?} overflows", graph.id(p)))
                })?;
            if table.len() != want {
                return Err(Error::InvalidStructure(format!(
                    "table for player {:?} has {} entries, scope needs {want}",
                    graph.id(p),
                    table.len()
                )));
            }
        }
        Ok(GraphicalGame { graph, actions, scopes, tables })
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    /// Scope of `player`: itself first, then in-neighbors ascending by id.
    pub fn scope(&self, player: usize) -> &[usize] {
        &self.scopes[player]
    }

    pub fn table(&self, player: usize) -> &[BigRational] {
        &self.tables[player]
    }
}

impl Game for GraphicalGame {
    fn graph(&self) -> &Digraph {
        &self.graph
    }

    fn action_count(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    fn action_label(&self, player: usize, action: usize) -> String {
        self.actions[player][action].clone()
    }

    fn utility(&self, player: usize, own: usize, profile: &[usize]) -> &BigRational {
        let idx = flat_index(own, &self.scopes[player][1..], |v| self.actions[v].len(), profile);
        &self.tables[player][idx]
    }

    fn restricted_to(&self, kept: &[usize]) -> Self {
        assert!(kept.windows(2).all(|w| w[0] < w[1]), "kept players must be ascending");
        for &v in kept {
            assert!(
                self.graph.in_neighbors(v).iter().all(|u| kept.binary_search(u).is_ok()),
                "kept players must be closed under in-neighbors"
            );
        }
        let graph = self.graph.subgraph(kept);
        let actions = kept.iter().map(|&v| self.actions[v].clone()).collect();
        let tables = kept.iter().map(|&v| self.tables[v].clone()).collect();
        GraphicalGame::new(graph, actions, tables)
            .expect("restriction preserves scopes and table shapes")
    }
}

/// A colored hypergraphical game: every player has the same action count
/// `m` (actions are the indices 0..m−1), each vertex's scope is its
/// hyperedge, and edges of equal color share one utility table (indexed in
/// tuple order, last position fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraphicalGame {
    structure: GameHypergraph,
    digraph: Digraph,
    actions: usize,
    tables: BTreeMap<String, Vec<BigRational>>,
}

impl ColoredHypergraphicalGame {
    pub fn new(
        structure: GameHypergraph,
        actions: usize,
        tables: BTreeMap<String, Vec<BigRational>>,
    ) -> Result<Self> {
        if actions == 0 {
            return Err(Error::InvalidStructure("players need at least one action".into()));
        }
        let h = structure.hypergraph();
        let colors: Vec<&str> = h.colors();
        for &c in &colors {
            let table = tables.get(c).ok_or_else(|| {
                Error::InvalidStructure(format!("color {c:?} has no utility table"))
            })?;
            let r = h.arity_of(c).expect("color comes from an edge") as u32;
            let want = (actions as u64).checked_pow(r).ok_or_else(|| {
                Error::InvalidStructure(format!("table for color {c:?} overflows"))
            })?;
            if table.len() as u64 != want {
                return Err(Error::InvalidStructure(format!(
                    "table for color {c:?} has {} entries, arity {r} with {actions} actions needs {want}",
                    table.len()
                )));
            }
        }
        if let Some(extra) = tables.keys().find(|c| !colors.contains(&c.as_str())) {
            return Err(Error::InvalidStructure(format!(
                "utility table for color {extra:?}, which no edge carries"
            )));
        }
        let digraph = induced_digraph(&structure);
        Ok(ColoredHypergraphicalGame { structure, digraph, actions, tables })
    }

    pub fn structure(&self) -> &GameHypergraph {
        &self.structure
    }

    pub fn hypergraph(&self) -> &ColoredHypergraph {
        self.structure.hypergraph()
    }

    pub fn action_total(&self) -> usize {
        self.actions
    }

    pub fn tables(&self) -> &BTreeMap<String, Vec<BigRational>> {
        &self.tables
    }

    /// Table value of `color` at an explicit argument tuple.
    pub fn color_utility(&self, color: &str, args: &[usize]) -> &BigRational {
        let table = &self.tables[color];
        let mut idx = 0;
        for &a in args {
            idx = idx * self.actions + a;
        }
        &table[idx]
    }
}

impl Game for ColoredHypergraphicalGame {
    fn graph(&self) -> &Digraph {
        &self.digraph
    }

    fn action_count(&self, _player: usize) -> usize {
        self.actions
    }

    fn action_label(&self, _player: usize, action: usize) -> String {
        action.to_string()
    }

    fn utility(&self, player: usize, own: usize, profile: &[usize]) -> &BigRational {
        let e = self.structure.edge_of_vertex(player);
        let idx = flat_index(own, &e.tuple[1..], |_| self.actions, profile);
        &self.tables[&e.color][idx]
    }

    fn restricted_to(&self, kept: &[usize]) -> Self {
        assert!(kept.windows(2).all(|w| w[0] < w[1]), "kept players must be ascending");
        for &v in kept {
            assert!(
                self.digraph.in_neighbors(v).iter().all(|u| kept.binary_search(u).is_ok()),
                "kept players must be closed under in-neighbors"
            );
        }
        // Scope closure means the induced substructure keeps exactly the
        // edges headed by kept vertices, so it is again a game hypergraph.
        let inner = self.structure.hypergraph().induced(kept);
        let tables = self
            .tables
            .iter()
            .filter(|(c, _)| inner.arity_of(c).is_some())
            .map(|(c, t)| (c.clone(), t.clone()))
            .collect();
        let structure = GameHypergraph::new(inner).expect("restriction preserves scopes");
        ColoredHypergraphicalGame::new(structure, self.actions, tables)
            .expect("restriction preserves table shapes")
    }
}

/// Expands a colored hypergraphical game into the graphical game it
/// abbreviates: same players and digraph, actions renamed to their indices,
/// and each player's table filled from its color's shared table.
pub fn chg_to_graphical(game: &ColoredHypergraphicalGame) -> GraphicalGame {
    let graph = game.graph().clone();
    let n = graph.vertex_count();
    let m = game.action_total();
    let actions: Vec<Vec<String>> = (0..n)
        .map(|_| (0..m).map(|a| a.to_string()).collect())
        .collect();
    let mut tables = Vec::with_capacity(n);
    for p in 0..n {
        let e = game.structure().edge_of_vertex(p);
        // Graphical scope: p, then in-neighbors ascending. The hyperedge
        // tuple may order the same vertices differently, so permute.
        let mut scope = vec![p];
        scope.extend_from_slice(graph.in_neighbors(p));
        let positions: Vec<usize> = e
            .tuple
            .iter()
            .map(|v| scope.iter().position(|s| s == v).expect("scopes coincide as sets"))
            .collect();
        let size = m.pow(scope.len() as u32);
        let mut table = Vec::with_capacity(size);
        let mut combo = vec![0usize; scope.len()];
        for _ in 0..size {
            let args: Vec<usize> = positions.iter().map(|&q| combo[q]).collect();
            table.push(game.color_utility(&e.color, &args).clone());
            for slot in (0..combo.len()).rev() {
                combo[slot] += 1;
                if combo[slot] < m {
                    break;
                }
                combo[slot] = 0;
            }
        }
        tables.push(table);
    }
    GraphicalGame::new(graph, actions, tables).expect("expansion preserves shapes")
}
