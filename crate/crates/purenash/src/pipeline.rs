//! The solve pipeline: a game's pure equilibria correspond exactly to the
//! homomorphisms from its (reduced) structure into a best-response
//! structure over its actions. Deciding PSNE existence therefore reduces to
//! sink removal, one homomorphism instance, and greedy re-extension.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::games::{
    best_responses, player_count, ColoredHypergraphicalGame, Game, GraphicalGame, Profile,
};
use crate::graphs::{induced_hypergraph, primal_graph, ColoredHypergraph};
use crate::homomorphism::{
    brute_force_hom, core, dp_hom, CoreResult, HomInstance, VertexMapping, DEFAULT_CORE_CAP,
    DEFAULT_HOM_CAP,
};
use crate::reduction::{extend_psne, reduce_game};
use crate::treewidth::heuristic_decomposition;

/// Builds the homomorphism instance whose solutions are exactly the pure
/// equilibria of the game: the left side is the game's hypergraph
/// unchanged; the right side has one vertex per action, and for every color
/// and every neighbor tuple, one edge per best-response action (argmax ties
/// all included).
pub fn game_to_hom(game: &ColoredHypergraphicalGame) -> HomInstance {
    let left = game.hypergraph().clone();
    let m = game.action_total();
    let names: Vec<String> = (0..m).map(|a| a.to_string()).collect();
    let mut edges: Vec<(Vec<String>, String)> = Vec::new();
    for color in game.tables().keys() {
        let r = left.arity_of(color).expect("tables cover exactly the used colors");
        let tail = r - 1;
        let mut combo = vec![0usize; tail];
        let count = (m as u64).pow(tail as u32);
        let mut args = vec![0usize; r];
        for _ in 0..count {
            args[1..].copy_from_slice(&combo);
            args[0] = 0;
            let mut best = vec![0usize];
            let mut best_u = game.color_utility(color, &args);
            for own in 1..m {
                args[0] = own;
                let u = game.color_utility(color, &args);
                if u > best_u {
                    best.clear();
                    best.push(own);
                    best_u = u;
                } else if u == best_u {
                    best.push(own);
                }
            }
            for own in best {
                let mut tuple = Vec::with_capacity(r);
                tuple.push(names[own].clone());
                tuple.extend(combo.iter().map(|&a| names[a].clone()));
                edges.push((tuple, color.clone()));
            }
            for slot in (0..tail).rev() {
                combo[slot] += 1;
                if combo[slot] < m {
                    break;
                }
                combo[slot] = 0;
            }
        }
    }
    let right = ColoredHypergraph::new(names, edges)
        .expect("distinct argument tuples yield distinct edges per color");
    HomInstance { left, right }
}

/// The distinct action labels of a graphical game in first-appearance order
/// (players in vertex order, actions in declared order). These are the
/// right-side vertices of [`graphical_to_hom`].
fn action_label_universe(game: &GraphicalGame) -> Vec<String> {
    let mut names = Vec::new();
    let mut seen = HashMap::new();
    for p in 0..player_count(game) {
        for label in game.actions(p) {
            if seen.insert(label.clone(), names.len()).is_none() {
                names.push(label.clone());
            }
        }
    }
    names
}

/// The best-response structure of a graphical game, with one color per
/// player (its vertex id). Works for unequal action counts, unlike the
/// colored-game route: the left side is the game's induced hypergraph, and
/// the color-`i` edges record player i's best responses, so a homomorphism
/// must send each player to one of its own action labels.
pub fn graphical_to_hom(game: &GraphicalGame) -> HomInstance {
    let left = induced_hypergraph(game.graph()).into_hypergraph();
    let names = action_label_universe(game);
    let n = player_count(game);
    let mut edges: Vec<(Vec<String>, String)> = Vec::new();
    let mut profile = vec![0usize; n];
    for p in 0..n {
        let scope = game.scope(p);
        let tail = &scope[1..];
        for &v in tail {
            profile[v] = 0;
        }
        loop {
            for own in best_responses(game, p, &profile) {
                let mut tuple = Vec::with_capacity(scope.len());
                tuple.push(game.action_label(p, own));
                tuple.extend(tail.iter().map(|&v| game.action_label(v, profile[v])));
                edges.push((tuple, game.graph().id(p).to_string()));
            }
            let mut slot = tail.len();
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                let v = tail[slot];
                profile[v] += 1;
                if profile[v] < game.action_count(v) {
                    break;
                }
                profile[v] = 0;
            }
            if slot == 0 && tail.iter().all(|&v| profile[v] == 0) {
                break;
            }
        }
    }
    let right = ColoredHypergraph::new(names, edges)
        .expect("labels are distinct per player, so edges never repeat within a color");
    HomInstance { left, right }
}

/// Rewrites a graphical game as a colored hypergraphical game: the induced
/// hypergraph (one fresh color per player, scopes in ascending-id order)
/// with each player's table attached to its color. Actions are renamed to
/// indices, so profiles carry over unchanged.
///
/// Requires one shared action count; games with unequal action counts can
/// be padded by hand with strictly dominated actions first.
pub fn graphical_to_chg(game: &GraphicalGame) -> Result<ColoredHypergraphicalGame> {
    let n = player_count(game);
    let m = if n == 0 { 1 } else { game.action_count(0) };
    if let Some(p) = (0..n).find(|&p| game.action_count(p) != m) {
        return Err(Error::Precondition(format!(
            "player {:?} has {} actions but player {:?} has {m}; equalize first (for example by \
             padding with strictly dominated actions)",
            game.graph().id(p),
            game.action_count(p),
            game.graph().id(0),
        )));
    }
    let structure = induced_hypergraph(game.graph());
    let tables = (0..n)
        .map(|p| (game.graph().id(p).to_string(), game.table(p).to_vec()))
        .collect();
    ColoredHypergraphicalGame::new(structure, m, tables)
}

/// Knobs of [`decide_psne_chg`] and [`decide_psne_graphical`].
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Use the tree DP when the heuristic decomposition width is at most
    /// this; otherwise fall back to capped brute force.
    pub width_threshold: i64,
    /// Mapping-space cap for the brute-force fallback.
    pub hom_cap: u64,
    /// Replace the left structure by its core before decomposing (witness
    /// recovered through the retraction). Off by default; skipped silently
    /// when the structure exceeds `core_cap`.
    pub core_first: bool,
    pub core_cap: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            width_threshold: 12,
            hom_cap: DEFAULT_HOM_CAP,
            core_first: false,
            core_cap: DEFAULT_CORE_CAP,
        }
    }
}

/// How the decision was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveBackend {
    /// The reduction emptied the game; a greedy extension is an equilibrium.
    GreedyExtension,
    /// Tree-decomposition dynamic program.
    TreeDp,
    /// Brute-force homomorphism search.
    BruteForceHom,
}

impl SolveBackend {
    pub fn name(&self) -> &'static str {
        match self {
            SolveBackend::GreedyExtension => "greedy",
            SolveBackend::TreeDp => "tree-dp",
            SolveBackend::BruteForceHom => "brute-force",
        }
    }
}

/// Outcome of a solve: the decision, a witness on the original game when
/// one exists, and diagnostics about the route taken.
#[derive(Debug, Clone)]
pub struct PsneOutcome {
    pub exists: bool,
    /// An equilibrium of the original (unreduced) game.
    pub witness: Option<Profile>,
    pub backend: SolveBackend,
    /// Heuristic decomposition width of the solved instance, when one was
    /// built.
    pub decomposition_width: Option<i64>,
    /// Sink-removal rounds (vertex ids).
    pub rounds: Vec<Vec<String>>,
    /// Surviving vertex ids.
    pub kept: Vec<String>,
}

fn decide_impl<G, H, D>(game: &G, cfg: &SolveConfig, to_hom: H, decode: D) -> Result<PsneOutcome>
where
    G: Game,
    H: FnOnce(&G) -> HomInstance,
    D: FnOnce(&G, &VertexMapping) -> Profile,
{
    let (reduced, trace) = reduce_game(game);
    let rounds = trace.rounds_ids(game.graph());
    let kept = trace.kept_ids(game.graph());
    if player_count(&reduced) == 0 {
        let witness = extend_psne(game, &trace, &[])?;
        return Ok(PsneOutcome {
            exists: true,
            witness: Some(witness),
            backend: SolveBackend::GreedyExtension,
            decomposition_width: None,
            rounds,
            kept,
        });
    }
    let instance = to_hom(&reduced);
    let (instance, lift): (HomInstance, Option<CoreResult>) =
        if cfg.core_first && instance.left.vertex_count() <= cfg.core_cap {
            let c = core(&instance.left, cfg.core_cap)?;
            (HomInstance { left: c.core.clone(), right: instance.right }, Some(c))
        } else {
            (instance, None)
        };
    let td = heuristic_decomposition(&primal_graph(&instance.left));
    let width = td.width();
    let (mapping, backend) = if width <= cfg.width_threshold {
        (dp_hom(&instance, &td)?, SolveBackend::TreeDp)
    } else {
        (brute_force_hom(&instance, cfg.hom_cap)?, SolveBackend::BruteForceHom)
    };
    match mapping {
        None => Ok(PsneOutcome {
            exists: false,
            witness: None,
            backend,
            decomposition_width: Some(width),
            rounds,
            kept,
        }),
        Some(m) => {
            let on_left = match &lift {
                None => m,
                Some(c) => c.retraction.iter().map(|&cv| m[cv]).collect(),
            };
            let reduced_profile = decode(&reduced, &on_left);
            let witness = extend_psne(game, &trace, &reduced_profile)?;
            Ok(PsneOutcome {
                exists: true,
                witness: Some(witness),
                backend,
                decomposition_width: Some(width),
                rounds,
                kept,
            })
        }
    }
}

/// Decides whether a colored hypergraphical game has a pure equilibrium:
/// reduce, build the best-response instance, solve it by tree DP (or capped
/// brute force past the width threshold), and extend the witness greedily.
pub fn decide_psne_chg(
    game: &ColoredHypergraphicalGame,
    cfg: &SolveConfig,
) -> Result<PsneOutcome> {
    decide_impl(game, cfg, game_to_hom, |_, mapping| {
        // Right vertices are the actions in index order.
        mapping.clone()
    })
}

/// Decides whether a graphical game has a pure equilibrium; same pipeline
/// as [`decide_psne_chg`] over the per-player-color instance, so unequal
/// action counts are fine.
pub fn decide_psne_graphical(game: &GraphicalGame, cfg: &SolveConfig) -> Result<PsneOutcome> {
    decide_impl(game, cfg, graphical_to_hom, |reduced, mapping| {
        let names = action_label_universe(reduced);
        (0..player_count(reduced))
            .map(|p| {
                let label = &names[mapping[p]];
                reduced
                    .actions(p)
                    .iter()
                    .position(|l| l == label)
                    .expect("a homomorphism sends each player to one of its own labels")
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{brute_force_psne, is_psne, rat, DEFAULT_PROFILE_CAP};
    use crate::graphs::{Digraph, GameHypergraph};
    use crate::homomorphism::check_homomorphism;
    use std::collections::BTreeMap;

    fn unary_chg(utilities: Vec<num::BigRational>) -> ColoredHypergraphicalGame {
        let h = ColoredHypergraph::new(vec!["a"], vec![(vec!["a"], "c")]).unwrap();
        let m = utilities.len();
        let mut tables = BTreeMap::new();
        tables.insert("c".to_string(), utilities);
        ColoredHypergraphicalGame::new(GameHypergraph::new(h).unwrap(), m, tables).unwrap()
    }

    #[test]
    fn unique_argmax_yields_one_edge() {
        let game = unary_chg(vec![rat(5, 1), rat(7, 1)]);
        let inst = game_to_hom(&game);
        assert_eq!(inst.left, *game.hypergraph());
        assert_eq!(inst.right.vertex_ids(), &["0".to_string(), "1".to_string()]);
        assert_eq!(inst.right.edges().len(), 1);
        assert_eq!(inst.right.edges()[0].tuple, vec![1]);
    }

    #[test]
    fn argmax_ties_yield_all_edges() {
        let game = unary_chg(vec![rat(7, 1), rat(7, 1)]);
        let inst = game_to_hom(&game);
        assert_eq!(inst.right.edges().len(), 2);
    }

    fn mp_chg() -> ColoredHypergraphicalGame {
        let h = ColoredHypergraph::new(
            vec!["a", "b"],
            vec![(vec!["a", "b"], "match"), (vec!["b", "a"], "mismatch")],
        )
        .unwrap();
        let mut tables = BTreeMap::new();
        tables.insert("match".to_string(), vec![rat(1, 1), rat(-1, 1), rat(-1, 1), rat(1, 1)]);
        tables.insert("mismatch".to_string(), vec![rat(-1, 1), rat(1, 1), rat(1, 1), rat(-1, 1)]);
        ColoredHypergraphicalGame::new(GameHypergraph::new(h).unwrap(), 2, tables).unwrap()
    }

    #[test]
    fn matching_pennies_instance_has_no_homomorphism() {
        let inst = game_to_hom(&mp_chg());
        assert_eq!(brute_force_hom(&inst, 100).unwrap(), None);
    }

    #[test]
    fn equilibria_and_homomorphisms_coincide_on_matching_pennies_structure() {
        // Coordination variant: both colors reward matching, so (0,0) and
        // (1,1) are equilibria and the identity-style mappings exist.
        let h = ColoredHypergraph::new(
            vec!["a", "b"],
            vec![(vec!["a", "b"], "c1"), (vec!["b", "a"], "c2")],
        )
        .unwrap();
        let coord = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)];
        let mut tables = BTreeMap::new();
        tables.insert("c1".to_string(), coord.clone());
        tables.insert("c2".to_string(), coord);
        let game =
            ColoredHypergraphicalGame::new(GameHypergraph::new(h).unwrap(), 2, tables).unwrap();
        let inst = game_to_hom(&game);
        for profile in [[0usize, 0], [0, 1], [1, 0], [1, 1]] {
            let as_mapping = profile.to_vec();
            assert_eq!(is_psne(&game, &profile), check_homomorphism(&inst, &as_mapping));
        }
    }

    #[test]
    fn chg_rewrite_of_matching_pennies_preserves_equilibria() {
        let g = Digraph::new(vec!["a", "b"], vec![("a", "b"), ("b", "a")]).unwrap();
        let acts = vec![vec!["H".into(), "T".into()], vec!["H".into(), "T".into()]];
        let match_t = vec![rat(1, 1), rat(-1, 1), rat(-1, 1), rat(1, 1)];
        let mismatch_t = vec![rat(-1, 1), rat(1, 1), rat(1, 1), rat(-1, 1)];
        let gg = GraphicalGame::new(g, acts, vec![match_t, mismatch_t]).unwrap();
        let chg = graphical_to_chg(&gg).unwrap();
        for profile in [[0usize, 0], [0, 1], [1, 0], [1, 1]] {
            assert_eq!(is_psne(&gg, &profile), is_psne(&chg, &profile));
        }
    }

    #[test]
    fn chg_rewrite_rejects_unequal_action_counts() {
        let g = Digraph::new(vec!["a", "b"], vec![]).unwrap();
        let acts = vec![vec!["x".into()], vec!["x".into(), "y".into()]];
        let gg = GraphicalGame::new(
            g,
            acts,
            vec![vec![rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
        )
        .unwrap();
        assert!(matches!(graphical_to_chg(&gg), Err(Error::Precondition(_))));
    }

    #[test]
    fn isolated_player_becomes_a_unary_edge() {
        let g = Digraph::new(vec!["a"], vec![]).unwrap();
        let gg = GraphicalGame::new(
            g,
            vec![vec!["x".into(), "y".into()]],
            vec![vec![rat(0, 1), rat(1, 1)]],
        )
        .unwrap();
        let chg = graphical_to_chg(&gg).unwrap();
        assert_eq!(chg.hypergraph().edges().len(), 1);
        assert_eq!(chg.hypergraph().edges()[0].tuple, vec![0]);
        assert_eq!(brute_force_psne(&chg, 10).unwrap(), Some(vec![1]));
    }

    #[test]
    fn dag_game_solves_greedily() {
        let g = Digraph::new(vec!["a", "b"], vec![("a", "b")]).unwrap();
        let acts: Vec<Vec<String>> = (0..2).map(|_| vec!["x".into(), "y".into()]).collect();
        let gg = GraphicalGame::new(
            g,
            acts,
            vec![
                vec![rat(0, 1), rat(5, 1)],
                vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)],
            ],
        )
        .unwrap();
        let out = decide_psne_graphical(&gg, &SolveConfig::default()).unwrap();
        assert!(out.exists);
        assert_eq!(out.backend, SolveBackend::GreedyExtension);
        assert_eq!(out.witness, Some(vec![1, 1]));
        assert_eq!(out.rounds, vec![vec!["b".to_string()], vec!["a".to_string()]]);
    }

    #[test]
    fn matching_pennies_solves_to_no() {
        let out = decide_psne_chg(&mp_chg(), &SolveConfig::default()).unwrap();
        assert!(!out.exists);
        assert_eq!(out.backend, SolveBackend::TreeDp);
        assert_eq!(out.witness, None);
    }

    #[test]
    fn unequal_action_counts_solve_through_the_label_instance() {
        // A 3-action player observed by a 2-action copier (copies when it
        // can). Brute force agrees with the pipeline.
        let g = Digraph::new(vec!["a", "b"], vec![("a", "b"), ("b", "a")]).unwrap();
        let acts = vec![
            vec!["p".into(), "q".into(), "r".into()],
            vec!["p".into(), "q".into()],
        ];
        // a (3 actions, sees b's 2): prefers to differ from b.
        let ta = vec![
            rat(0, 1), rat(1, 1), // own p vs b's p,q
            rat(1, 1), rat(0, 1), // own q
            rat(2, 1), rat(2, 1), // own r always wins
        ];
        // b (2 actions, sees a's 3): copies a when possible.
        let tb = vec![
            rat(1, 1), rat(0, 1), rat(0, 1), // own p vs a's p,q,r
            rat(0, 1), rat(1, 1), rat(1, 1), // own q
        ];
        let gg = GraphicalGame::new(g, acts, vec![ta, tb]).unwrap();
        let by_brute = brute_force_psne(&gg, DEFAULT_PROFILE_CAP).unwrap();
        let out = decide_psne_graphical(&gg, &SolveConfig::default()).unwrap();
        assert_eq!(out.exists, by_brute.is_some());
        let w = out.witness.expect("(r, q) is an equilibrium");
        assert!(is_psne(&gg, &w));
    }

    #[test]
    fn core_first_preserves_decisions() {
        let game = mp_chg();
        let cfg = SolveConfig { core_first: true, ..SolveConfig::default() };
        let out = decide_psne_chg(&game, &cfg).unwrap();
        assert!(!out.exists);

        let coord_g = Digraph::new(vec!["a", "b"], vec![("a", "b"), ("b", "a")]).unwrap();
        let acts: Vec<Vec<String>> = (0..2).map(|_| vec!["H".into(), "T".into()]).collect();
        let coord = vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1)];
        let gg = GraphicalGame::new(coord_g, acts, vec![coord.clone(), coord]).unwrap();
        let with_core = decide_psne_graphical(&gg, &cfg).unwrap();
        let without = decide_psne_graphical(&gg, &SolveConfig::default()).unwrap();
        assert_eq!(with_core.exists, without.exists);
        assert!(is_psne(&gg, &with_core.witness.unwrap()));
    }
}
