//! Command-line front end: reads documents (files or `-` for stdin), runs
//! the requested computation, and writes a result document to stdout.
//! Diagnostics go to stderr. Exit codes: 0 = computed, 1 = usage or format
//! error, 2 = a resource cap refused the computation.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use purenash::document::{
    chg_doc, chg_from_doc, decomposition_doc, digraph_doc, digraph_from_doc,
    game_hypergraph_from_doc, graphical_game_doc, graphical_game_from_doc,
    hom_instance_from_doc, hypergraph_doc, hypergraph_from_doc, parse, serialize,
    CommandResult, Document, FORMAT_VERSION,
};
use purenash::error::{Error, Result};
use purenash::gadgets::{
    cycle_game, example15, hom_to_chg, hom_to_gg, hom_to_gg_direct, strongly_connected_game,
};
use purenash::games::{brute_force_psne, Game, GraphicalGame, DEFAULT_PROFILE_CAP};
use purenash::generate::{example15_game, rng_from_seed};
use purenash::graphs::{induced_hypergraph, primal_graph, scc};
use purenash::homomorphism::{
    brute_force_hom, dp_hom, HomInstance, DEFAULT_CORE_CAP, DEFAULT_HOM_CAP,
};
use purenash::pipeline::{decide_psne_chg, decide_psne_graphical, PsneOutcome, SolveConfig};
use purenash::reduction::{reduce_digraph, reduce_game};
use purenash::treewidth::{
    exact_treewidth, heuristic_decomposition, DEFAULT_EXACT_TREEWIDTH_CAP,
};

#[derive(Parser)]
#[command(
    name = "purenash",
    version,
    about = "Pure equilibria in graphical and colored hypergraphical games via \
             colored-hypergraph homomorphism"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iteratively remove sink players; print the kernel and the removal trace.
    Reduce {
        /// Input document (digraph, graphical_game, or chg); "-" for stdin.
        input: String,
    },
    /// Strongly connected components of a digraph, in topological order.
    Scc {
        /// Input digraph document; "-" for stdin.
        input: String,
    },
    /// Tree decomposition of the primal graph (of a hypergraph document, or
    /// of a digraph's induced hypergraph).
    Tw {
        /// Input document (digraph or hypergraph); "-" for stdin.
        input: String,
        /// Compute exact treewidth instead of the min-fill heuristic.
        #[arg(long)]
        exact: bool,
        /// Largest vertex count the exact algorithm will attempt.
        #[arg(long, default_value_t = DEFAULT_EXACT_TREEWIDTH_CAP)]
        cap: usize,
    },
    /// Decide colored-hypergraph homomorphism existence.
    Hom {
        /// Input hom_instance document; "-" for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = HomBackend::Auto)]
        backend: HomBackend,
        /// Mapping-space cap for the brute-force backend.
        #[arg(long, default_value_t = DEFAULT_HOM_CAP)]
        cap: u64,
        /// Auto mode uses the tree DP up to this heuristic width.
        #[arg(long, default_value_t = 12)]
        width_threshold: i64,
    },
    /// Decide pure-equilibrium existence via the homomorphism pipeline.
    Solve {
        /// Input game document (graphical_game or chg); "-" for stdin.
        input: String,
        /// Include the equilibrium profile in the result.
        #[arg(long)]
        witness: bool,
        /// Use the tree DP up to this heuristic width, brute force beyond.
        #[arg(long, default_value_t = 12)]
        width_threshold: i64,
        /// Mapping-space cap for the brute-force fallback.
        #[arg(long, default_value_t = DEFAULT_HOM_CAP)]
        hom_cap: u64,
        /// Replace the left structure by its core before decomposing.
        #[arg(long)]
        core_first: bool,
        /// Largest structure the core computation will attempt.
        #[arg(long, default_value_t = DEFAULT_CORE_CAP)]
        core_cap: usize,
    },
    /// Exhaustive pure-equilibrium search (the oracle the pipeline is
    /// checked against).
    Brute {
        /// Input game document (graphical_game or chg); "-" for stdin.
        input: String,
        /// Profile-space cap.
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: u64,
    },
    /// Emit a gadget construction as a document.
    Gadget {
        #[arg(long, value_enum)]
        variant: Variant,
        /// Left input document, where the variant takes one.
        #[arg(long)]
        left: Option<String>,
        /// Right input document, where the variant takes one.
        #[arg(long)]
        right: Option<String>,
        /// Cycle length (cycle-mod-p).
        #[arg(long)]
        n: Option<usize>,
        /// Action count (cycle-mod-p).
        #[arg(long)]
        p: Option<usize>,
        /// Family size (example15).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Emit a watcher-family game (the example15 structure with seeded
    /// random utilities).
    GenExample15 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        /// Seed for the random utility tables.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse and validate a document without computing anything.
    Validate {
        /// Input document of any kind; "-" for stdin.
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HomBackend {
    Auto,
    Dp,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    /// Graphical game with T/B failure actions (needs an irreducible
    /// digraph --left and a hypergraph --right).
    GraphicalTb,
    /// Colored game with the 2n+1 failure-action chain (needs a game
    /// hypergraph --left and a hypergraph --right).
    ChgFailure,
    /// Directed n-cycle with best response (a+1) mod p (needs --n and --p).
    CycleModP,
    /// No-equilibrium game on a strongly connected digraph (needs --left).
    StronglyConnected,
    /// Direct watcher-pair encoding of a homomorphism instance (needs
    /// hypergraphs --left and --right).
    DirectXy,
    /// The watcher-family structure (needs --m).
    Example15,
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load(path: &str) -> Result<Document> {
    parse(&read_input(path)?)
}

fn result_doc(result: CommandResult) -> Document {
    Document::Result { version: FORMAT_VERSION.into(), result }
}

fn usage(msg: &str) -> Error {
    Error::Precondition(msg.into())
}

fn run_reduce(input: &str) -> Result<Document> {
    let doc = load(input)?;
    let (reduced, rounds, kept) = match &doc {
        Document::Digraph { .. } => {
            let g = digraph_from_doc(&doc)?;
            let (kernel, trace) = reduce_digraph(&g);
            (digraph_doc(&kernel), trace.rounds_ids(&g), trace.kept_ids(&g))
        }
        Document::GraphicalGame { .. } => {
            let game = graphical_game_from_doc(&doc)?;
            let (kernel, trace) = reduce_game(&game);
            (graphical_game_doc(&kernel), trace.rounds_ids(game.graph()), trace.kept_ids(game.graph()))
        }
        Document::Chg { .. } => {
            let game = chg_from_doc(&doc)?;
            let (kernel, trace) = reduce_game(&game);
            (chg_doc(&kernel), trace.rounds_ids(game.graph()), trace.kept_ids(game.graph()))
        }
        _ => {
            return Err(usage("reduce expects a digraph, graphical_game, or chg document"));
        }
    };
    Ok(result_doc(CommandResult::Reduce { reduced: Box::new(reduced), rounds, kept }))
}

fn run_scc(input: &str) -> Result<Document> {
    let g = digraph_from_doc(&load(input)?)?;
    let parts = scc(&g);
    let components: Vec<Vec<String>> = parts
        .components()
        .iter()
        .map(|comp| comp.iter().map(|&v| g.id(v).to_string()).collect())
        .collect();
    let terminal: Vec<bool> = (0..components.len()).map(|c| parts.is_terminal(c)).collect();
    Ok(result_doc(CommandResult::Scc { components, terminal }))
}

fn run_tw(input: &str, exact: bool, cap: usize) -> Result<Document> {
    let doc = load(input)?;
    let primal = match &doc {
        Document::Digraph { .. } => {
            let g = digraph_from_doc(&doc)?;
            primal_graph(induced_hypergraph(&g).hypergraph())
        }
        Document::Hypergraph { .. } => primal_graph(&hypergraph_from_doc(&doc)?),
        _ => return Err(usage("tw expects a digraph or hypergraph document")),
    };
    let (width, td) = if exact {
        exact_treewidth(&primal, cap)?
    } else {
        let td = heuristic_decomposition(&primal);
        (td.width(), td)
    };
    let decomposition = decomposition_doc(primal.vertex_ids(), &td);
    Ok(result_doc(CommandResult::Tw { width, exact, decomposition: Box::new(decomposition) }))
}

fn hom_witness_map(inst: &HomInstance, mapping: &[usize]) -> BTreeMap<String, String> {
    mapping
        .iter()
        .enumerate()
        .map(|(v, &img)| (inst.left.id(v).to_string(), inst.right.id(img).to_string()))
        .collect()
}

fn run_hom(input: &str, backend: HomBackend, cap: u64, width_threshold: i64) -> Result<Document> {
    let inst = hom_instance_from_doc(&load(input)?)?;
    let use_dp = match backend {
        HomBackend::Dp => true,
        HomBackend::Brute => false,
        HomBackend::Auto => {
            heuristic_decomposition(&primal_graph(&inst.left)).width() <= width_threshold
        }
    };
    let (mapping, backend_name) = if use_dp {
        let td = heuristic_decomposition(&primal_graph(&inst.left));
        (dp_hom(&inst, &td)?, "tree-dp")
    } else {
        (brute_force_hom(&inst, cap)?, "brute-force")
    };
    Ok(result_doc(CommandResult::Hom {
        exists: mapping.is_some(),
        backend: backend_name.into(),
        witness: mapping.map(|m| hom_witness_map(&inst, &m)),
    }))
}

fn graphical_profile_map(game: &GraphicalGame, profile: &[usize]) -> BTreeMap<String, String> {
    profile
        .iter()
        .enumerate()
        .map(|(p, &a)| (game.graph().id(p).to_string(), game.actions(p)[a].clone()))
        .collect()
}

fn solve_result(outcome: PsneOutcome, witness: Option<BTreeMap<String, String>>) -> Document {
    result_doc(CommandResult::Solve {
        exists: outcome.exists,
        backend: outcome.backend.name().into(),
        decomposition_width: outcome.decomposition_width,
        rounds: outcome.rounds,
        kept: outcome.kept,
        witness,
    })
}

fn run_solve(input: &str, want_witness: bool, cfg: &SolveConfig) -> Result<Document> {
    let doc = load(input)?;
    match &doc {
        Document::GraphicalGame { .. } => {
            let game = graphical_game_from_doc(&doc)?;
            let outcome = decide_psne_graphical(&game, cfg)?;
            let witness = outcome
                .witness
                .as_ref()
                .filter(|_| want_witness)
                .map(|w| graphical_profile_map(&game, w));
            Ok(solve_result(outcome, witness))
        }
        Document::Chg { .. } => {
            let game = chg_from_doc(&doc)?;
            let outcome = decide_psne_chg(&game, cfg)?;
            let witness = outcome.witness.as_ref().filter(|_| want_witness).map(|w| {
                w.iter()
                    .enumerate()
                    .map(|(p, &a)| (game.hypergraph().id(p).to_string(), a.to_string()))
                    .collect()
            });
            Ok(solve_result(outcome, witness))
        }
        _ => Err(usage("solve expects a graphical_game or chg document")),
    }
}

fn run_brute(input: &str, cap: u64) -> Result<Document> {
    let doc = load(input)?;
    let witness = match &doc {
        Document::GraphicalGame { .. } => {
            let game = graphical_game_from_doc(&doc)?;
            brute_force_psne(&game, cap)?.map(|w| graphical_profile_map(&game, &w))
        }
        Document::Chg { .. } => {
            let game = chg_from_doc(&doc)?;
            brute_force_psne(&game, cap)?.map(|w| {
                w.iter()
                    .enumerate()
                    .map(|(p, &a)| (game.hypergraph().id(p).to_string(), a.to_string()))
                    .collect()
            })
        }
        _ => return Err(usage("brute expects a graphical_game or chg document")),
    };
    Ok(result_doc(CommandResult::Brute { exists: witness.is_some(), witness }))
}

fn run_gadget(
    variant: Variant,
    left: Option<&str>,
    right: Option<&str>,
    n: Option<usize>,
    p: Option<usize>,
    m: Option<usize>,
) -> Result<Document> {
    match variant {
        Variant::GraphicalTb => {
            let (l, r) = two_inputs(left, right, "an irreducible digraph", "a hypergraph")?;
            let g = digraph_from_doc(&load(l)?)?;
            let h = hypergraph_from_doc(&load(r)?)?;
            Ok(graphical_game_doc(&hom_to_gg(&g, &h)?))
        }
        Variant::ChgFailure => {
            let (l, r) = two_inputs(left, right, "a game hypergraph", "a hypergraph")?;
            let g = game_hypergraph_from_doc(&load(l)?)?;
            let h = hypergraph_from_doc(&load(r)?)?;
            Ok(chg_doc(&hom_to_chg(&g, &h)?))
        }
        Variant::CycleModP => {
            let n = n.ok_or_else(|| usage("cycle-mod-p requires --n (cycle length)"))?;
            let p = p.ok_or_else(|| usage("cycle-mod-p requires --p (action count)"))?;
            Ok(chg_doc(&cycle_game(n, p)?))
        }
        Variant::StronglyConnected => {
            let l = left
                .ok_or_else(|| usage("strongly-connected requires --left (a digraph)"))?;
            let g = digraph_from_doc(&load(l)?)?;
            Ok(chg_doc(&strongly_connected_game(&g)?))
        }
        Variant::DirectXy => {
            let (l, r) = two_inputs(left, right, "a hypergraph", "a hypergraph")?;
            let g = hypergraph_from_doc(&load(l)?)?;
            let h = hypergraph_from_doc(&load(r)?)?;
            Ok(graphical_game_doc(&hom_to_gg_direct(&g, &h)?))
        }
        Variant::Example15 => {
            let m = m.ok_or_else(|| usage("example15 requires --m (family size)"))?;
            Ok(hypergraph_doc(example15(m)?.hypergraph()))
        }
    }
}

fn two_inputs<'a>(
    left: Option<&'a str>,
    right: Option<&'a str>,
    left_desc: &str,
    right_desc: &str,
) -> Result<(&'a str, &'a str)> {
    match (left, right) {
        (Some(l), Some(r)) => Ok((l, r)),
        _ => Err(usage(&format!(
            "this variant requires --left ({left_desc}) and --right ({right_desc})"
        ))),
    }
}

fn run(cli: Cli) -> Result<String> {
    let doc = match cli.command {
        Command::Reduce { input } => run_reduce(&input)?,
        Command::Scc { input } => run_scc(&input)?,
        Command::Tw { input, exact, cap } => run_tw(&input, exact, cap)?,
        Command::Hom { input, backend, cap, width_threshold } => {
            run_hom(&input, backend, cap, width_threshold)?
        }
        Command::Solve { input, witness, width_threshold, hom_cap, core_first, core_cap } => {
            let cfg = SolveConfig { width_threshold, hom_cap, core_first, core_cap };
            run_solve(&input, witness, &cfg)?
        }
        Command::Brute { input, cap } => run_brute(&input, cap)?,
        Command::Gadget { variant, left, right, n, p, m } => {
            run_gadget(variant, left.as_deref(), right.as_deref(), n, p, m)?
        }
        Command::GenExample15 { m, actions, seed } => {
            let game = example15_game(&mut rng_from_seed(seed), m, actions)?;
            chg_doc(&game)
        }
        Command::Validate { input } => {
            let doc = load(&input)?;
            result_doc(CommandResult::Validate {
                valid: true,
                document_kind: doc.kind_name().into(),
            })
        }
    };
    Ok(serialize(&doc))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version arrive here; they are not failures.
            let failed = e.use_stderr();
            let _ = e.print();
            return if failed { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
