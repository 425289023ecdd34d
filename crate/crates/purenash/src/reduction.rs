//! Iterated sink removal. Sinks influence nobody, so a game has a pure
//! equilibrium exactly when its sink-free reduction has one, and any reduced
//! equilibrium extends greedily back to the full game.

use crate::error::{Error, Result};
use crate::games::{best_responses, is_psne, player_count, Game, Profile};
use crate::graphs::Digraph;

/// What iterated sink removal did: which vertices fell in which round, and
/// which remain. All indices refer to the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    rounds: Vec<Vec<usize>>,
    kept: Vec<usize>,
}

impl ReductionTrace {
    /// Removal rounds in order; each round lists the vertices that were
    /// simultaneously sinks, ascending.
    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }

    /// Surviving vertices, ascending. Their order is the vertex order of
    /// the reduced graph.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn removed_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    pub fn rounds_ids(&self, g: &Digraph) -> Vec<Vec<String>> {
        self.rounds
            .iter()
            .map(|r| r.iter().map(|&v| g.id(v).to_string()).collect())
            .collect()
    }

    pub fn kept_ids(&self, g: &Digraph) -> Vec<String> {
        self.kept.iter().map(|&v| g.id(v).to_string()).collect()
    }
}

/// Removes sinks round by round until none remain, returning the reduced
/// graph and the trace. The fixpoint has no sinks, so it is irreducible;
/// it may be empty (always for acyclic input).
pub fn reduce_digraph(g: &Digraph) -> (Digraph, ReductionTrace) {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut out_deg: Vec<usize> = (0..n).map(|v| g.out_neighbors(v).len()).collect();
    let mut rounds = Vec::new();
    loop {
        let round: Vec<usize> = (0..n).filter(|&v| alive[v] && out_deg[v] == 0).collect();
        if round.is_empty() {
            break;
        }
        for &v in &round {
            alive[v] = false;
        }
        for &v in &round {
            for &u in g.in_neighbors(v) {
                if alive[u] {
                    out_deg[u] -= 1;
                }
            }
        }
        rounds.push(round);
    }
    let kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let reduced = g.subgraph(&kept);
    (reduced, ReductionTrace { rounds, kept })
}

/// Restricts a game to the sink-free part of its digraph. Equilibrium
/// existence is preserved: sinks best-respond to whatever the rest plays,
/// and nobody reads a sink's action (everything a sink influences was
/// removed in an earlier round).
pub fn reduce_game<G: Game>(game: &G) -> (G, ReductionTrace) {
    let (_, trace) = reduce_digraph(game.graph());
    let reduced = game.restricted_to(trace.kept());
    (reduced, trace)
}

/// Extends an equilibrium of the reduced game to the full game. Removed
/// vertices are assigned in reverse removal order (their in-neighbors were
/// all kept or removed in later rounds, so each sees a fully decided
/// profile) and greedily pick their first best response.
///
/// `reduced` is indexed by the reduced game's player order, i.e. aligned
/// with `trace.kept()`. Fails if the result is not an equilibrium — which
/// happens exactly when `reduced` was not an equilibrium of the reduced
/// game.
pub fn extend_psne<G: Game>(game: &G, trace: &ReductionTrace, reduced: &[usize]) -> Result<Profile> {
    let n = player_count(game);
    if reduced.len() != trace.kept().len() {
        return Err(Error::Precondition(format!(
            "reduced profile has {} entries, the reduced game has {} players",
            reduced.len(),
            trace.kept().len()
        )));
    }
    let mut profile = vec![0usize; n];
    for (i, &v) in trace.kept().iter().enumerate() {
        profile[v] = reduced[i];
    }
    for round in trace.rounds().iter().rev() {
        for &v in round {
            profile[v] = best_responses(game, v, &profile)[0];
        }
    }
    if !is_psne(game, &profile) {
        let player = (0..n)
            .find(|&p| {
                let current = game.utility(p, profile[p], &profile);
                (0..game.action_count(p)).any(|a| game.utility(p, a, &profile) > current)
            })
            .expect("a non-equilibrium has a deviating player");
        return Err(Error::ExtensionFailed {
            player: game.graph().id(player).to_string(),
        });
    }
    Ok(profile)
}
