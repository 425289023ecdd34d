//! The on-disk document format: one JSON shape for every artifact the CLI
//! reads or writes, tagged by `kind`, with a format-version string.
//!
//! Serialization is canonical — fixed key order, declaration-order arrays,
//! rationals in lowest terms as `"p"` or `"p/q"` strings — so equal values
//! produce identical bytes. Parsing accepts integers for whole rationals
//! and classifies failures as malformed syntax, schema violations (with a
//! JSON path), or domain-invariant violations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::games::{ColoredHypergraphicalGame, Game, GraphicalGame};
use crate::graphs::{ColoredHypergraph, Digraph, GameHypergraph, UndirectedGraph};
use crate::homomorphism::HomInstance;
use crate::treewidth::{validate_decomposition, TreeDecomposition};

/// Current format version, written into every emitted document.
pub const FORMAT_VERSION: &str = "1";

/// An exact rational in transit: always a string `"p"` or `"p/q"` (lowest
/// terms, q > 0) on output; integers are also accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = &self.0;
        if r.denom() == &BigInt::from(1) {
            s.serialize_str(&r.numer().to_string())
        } else {
            s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
        }
    }
}

fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let (p, q) = match text.split_once('/') {
        None => (text, "1"),
        Some(parts) => parts,
    };
    let numer: BigInt =
        p.parse().map_err(|_| format!("invalid rational numerator {p:?}"))?;
    let denom: BigInt =
        q.parse().map_err(|_| format!("invalid rational denominator {q:?}"))?;
    if denom <= BigInt::from(0) {
        return Err(format!("rational denominator must be positive, got {q}"));
    }
    Ok(BigRational::new(numer, denom))
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;
        impl Visitor<'_> for RatVisitor {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a \"p/q\" string with q > 0")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> std::result::Result<Rat, E> {
                Err(E::custom("floating-point utilities are not accepted; write \"p/q\""))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
        }
        d.deserialize_any(RatVisitor)
    }
}

/// A hypergraph edge in transit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub tuple: Vec<String>,
    pub color: String,
}

/// A nested hypergraph body (used inside `hom_instance`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergraphBody {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

/// Any artifact the CLI reads or writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Digraph {
        version: String,
        vertices: Vec<String>,
        arcs: Vec<(String, String)>,
    },
    Hypergraph {
        version: String,
        vertices: Vec<String>,
        edges: Vec<EdgeDoc>,
    },
    /// Tables are flat arrays in scope order: own action varies slowest,
    /// then each in-neighbor (ascending by vertex id), last one fastest.
    GraphicalGame {
        version: String,
        vertices: Vec<String>,
        arcs: Vec<(String, String)>,
        actions: Vec<Vec<String>>,
        tables: Vec<Vec<Rat>>,
    },
    /// Tables are flat arrays in edge-tuple order: the head's own action
    /// varies slowest, the last tuple entry fastest.
    Chg {
        version: String,
        vertices: Vec<String>,
        edges: Vec<EdgeDoc>,
        actions: usize,
        tables: BTreeMap<String, Vec<Rat>>,
    },
    Decomposition {
        version: String,
        vertices: Vec<String>,
        bags: Vec<Vec<String>>,
        edges: Vec<(usize, usize)>,
    },
    HomInstance {
        version: String,
        left: HypergraphBody,
        right: HypergraphBody,
    },
    Result {
        version: String,
        result: CommandResult,
    },
}

/// The body of a `result` document, tagged by the command that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandResult {
    Reduce {
        reduced: Box<Document>,
        rounds: Vec<Vec<String>>,
        kept: Vec<String>,
    },
    Scc {
        components: Vec<Vec<String>>,
        terminal: Vec<bool>,
    },
    Tw {
        width: i64,
        exact: bool,
        decomposition: Box<Document>,
    },
    Hom {
        exists: bool,
        backend: String,
        witness: Option<BTreeMap<String, String>>,
    },
    Solve {
        exists: bool,
        backend: String,
        decomposition_width: Option<i64>,
        rounds: Vec<Vec<String>>,
        kept: Vec<String>,
        witness: Option<BTreeMap<String, String>>,
    },
    Brute {
        exists: bool,
        witness: Option<BTreeMap<String, String>>,
    },
    Validate {
        valid: bool,
        document_kind: String,
    },
}

impl Document {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Document::Digraph { .. } => "digraph",
            Document::Hypergraph { .. } => "hypergraph",
            Document::GraphicalGame { .. } => "graphical_game",
            Document::Chg { .. } => "chg",
            Document::Decomposition { .. } => "decomposition",
            Document::HomInstance { .. } => "hom_instance",
            Document::Result { .. } => "result",
        }
    }
}

/// Canonical serialization: pretty JSON with a trailing newline. Equal
/// documents produce identical bytes.
pub fn serialize(doc: &Document) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("plain data always serializes");
    text.push('\n');
    text
}

/// Parses and fully validates a document: syntax errors and schema
/// mismatches are reported with a JSON path; domain invariants (simple
/// digraph, color arities, table sizes, Σ membership for games) are checked
/// by constructing the domain values.
pub fn parse(text: &str) -> Result<Document> {
    let mut de = serde_json::Deserializer::from_str(text);
    let doc: Document = match serde_path_to_error::deserialize(&mut de) {
        Ok(doc) => doc,
        Err(err) => {
            let reason = err.inner().to_string();
            return Err(if err.inner().is_syntax() || err.inner().is_eof() {
                Error::MalformedDocument(reason)
            } else {
                Error::SchemaViolation { path: err.path().to_string(), reason }
            });
        }
    };
    validate_document(&doc)?;
    Ok(doc)
}

/// Re-runs the semantic checks of [`parse`] on an already-deserialized
/// document.
pub fn validate_document(doc: &Document) -> Result<()> {
    match doc {
        Document::Digraph { vertices, arcs, .. } => {
            digraph_from_parts(vertices, arcs).map(|_| ())
        }
        Document::Hypergraph { vertices, edges, .. } => {
            hypergraph_from_parts(vertices, edges).map(|_| ())
        }
        Document::GraphicalGame { .. } => graphical_game_from_doc(doc).map(|_| ()),
        Document::Chg { .. } => chg_from_doc(doc).map(|_| ()),
        Document::Decomposition { .. } => decomposition_from_doc(doc).map(|_| ()),
        Document::HomInstance { left, right, .. } => {
            hypergraph_from_parts(&left.vertices, &left.edges)?;
            hypergraph_from_parts(&right.vertices, &right.edges)?;
            Ok(())
        }
        Document::Result { result, .. } => {
            match result {
                CommandResult::Reduce { reduced, .. } => validate_document(reduced)?,
                CommandResult::Tw { decomposition, .. } => validate_document(decomposition)?,
                _ => {}
            }
            Ok(())
        }
    }
}

fn check_declared(
    vertices: &[String],
    field: &str,
) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(vertices.len());
    for (k, id) in vertices.iter().enumerate() {
        if index.insert(id.clone(), k).is_some() {
            return Err(Error::SchemaViolation {
                path: format!("{field}[{k}]"),
                reason: format!("duplicate vertex id {id:?}"),
            });
        }
    }
    Ok(index)
}

fn digraph_from_parts(vertices: &[String], arcs: &[(String, String)]) -> Result<Digraph> {
    let index = check_declared(vertices, "vertices")?;
    for (k, (u, w)) in arcs.iter().enumerate() {
        for end in [u, w] {
            if !index.contains_key(end) {
                return Err(Error::SchemaViolation {
                    path: format!("arcs[{k}]"),
                    reason: format!("arc endpoint {end:?} is not a declared vertex"),
                });
            }
        }
    }
    Digraph::new(vertices.to_vec(), arcs.to_vec()).map_err(|e| Error::InvariantViolation {
        path: "arcs".into(),
        reason: e.to_string(),
    })
}

fn hypergraph_from_parts(vertices: &[String], edges: &[EdgeDoc]) -> Result<ColoredHypergraph> {
    let index = check_declared(vertices, "vertices")?;
    for (k, e) in edges.iter().enumerate() {
        for (i, v) in e.tuple.iter().enumerate() {
            if !index.contains_key(v) {
                return Err(Error::SchemaViolation {
                    path: format!("edges[{k}].tuple[{i}]"),
                    reason: format!("tuple entry {v:?} is not a declared vertex"),
                });
            }
        }
    }
    let pairs: Vec<(Vec<String>, String)> =
        edges.iter().map(|e| (e.tuple.clone(), e.color.clone())).collect();
    ColoredHypergraph::new(vertices.to_vec(), pairs).map_err(|e| Error::InvariantViolation {
        path: "edges".into(),
        reason: e.to_string(),
    })
}

/// Converts a `digraph` document into a [`Digraph`].
pub fn digraph_from_doc(doc: &Document) -> Result<Digraph> {
    match doc {
        Document::Digraph { vertices, arcs, .. } => digraph_from_parts(vertices, arcs),
        _ => Err(wrong_kind("digraph", doc)),
    }
}

/// Converts a `hypergraph` document into a [`ColoredHypergraph`].
pub fn hypergraph_from_doc(doc: &Document) -> Result<ColoredHypergraph> {
    match doc {
        Document::Hypergraph { vertices, edges, .. } => hypergraph_from_parts(vertices, edges),
        _ => Err(wrong_kind("hypergraph", doc)),
    }
}

/// Converts a `hypergraph` document into a game-shaped structure,
/// additionally checking that every vertex heads exactly one edge with
/// distinct entries.
pub fn game_hypergraph_from_doc(doc: &Document) -> Result<GameHypergraph> {
    let h = hypergraph_from_doc(doc)?;
    GameHypergraph::new(h).map_err(|e| Error::InvariantViolation {
        path: "edges".into(),
        reason: e.to_string(),
    })
}

/// Converts a `graphical_game` document into a [`GraphicalGame`].
pub fn graphical_game_from_doc(doc: &Document) -> Result<GraphicalGame> {
    let Document::GraphicalGame { vertices, arcs, actions, tables, .. } = doc else {
        return Err(wrong_kind("graphical_game", doc));
    };
    let graph = digraph_from_parts(vertices, arcs)?;
    let n = graph.vertex_count();
    if actions.len() != n {
        return Err(Error::SchemaViolation {
            path: "actions".into(),
            reason: format!("expected one action list per vertex ({n}), got {}", actions.len()),
        });
    }
    if tables.len() != n {
        return Err(Error::SchemaViolation {
            path: "tables".into(),
            reason: format!("expected one table per vertex ({n}), got {}", tables.len()),
        });
    }
    for (p, table) in tables.iter().enumerate() {
        let mut size = actions[p].len();
        for &v in graph.in_neighbors(p) {
            size *= actions[v].len();
        }
        if table.len() != size {
            return Err(Error::SchemaViolation {
                path: format!("tables[{p}]"),
                reason: format!(
                    "table has {} entries but the scope of {:?} needs {size}",
                    table.len(),
                    graph.id(p),
                ),
            });
        }
    }
    let tables: Vec<Vec<BigRational>> =
        tables.iter().map(|t| t.iter().map(|r| r.0.clone()).collect()).collect();
    GraphicalGame::new(graph, actions.clone(), tables).map_err(|e| Error::InvariantViolation {
        path: "actions".into(),
        reason: e.to_string(),
    })
}

/// Converts a `chg` document into a [`ColoredHypergraphicalGame`].
pub fn chg_from_doc(doc: &Document) -> Result<ColoredHypergraphicalGame> {
    let Document::Chg { vertices, edges, actions, tables, .. } = doc else {
        return Err(wrong_kind("chg", doc));
    };
    let h = hypergraph_from_parts(vertices, edges)?;
    let structure = GameHypergraph::new(h).map_err(|e| Error::InvariantViolation {
        path: "edges".into(),
        reason: e.to_string(),
    })?;
    for (color, table) in tables {
        let Some(r) = structure.hypergraph().arity_of(color) else {
            return Err(Error::SchemaViolation {
                path: format!("tables.{color}"),
                reason: "table for a color that labels no edge".into(),
            });
        };
        let size = (*actions as u64).checked_pow(r as u32);
        if size != Some(table.len() as u64) {
            return Err(Error::SchemaViolation {
                path: format!("tables.{color}"),
                reason: format!(
                    "table has {} entries but arity {r} at {actions} actions needs {}",
                    table.len(),
                    size.map_or("too many".to_string(), |s| s.to_string()),
                ),
            });
        }
    }
    let tables: BTreeMap<String, Vec<BigRational>> = tables
        .iter()
        .map(|(c, t)| (c.clone(), t.iter().map(|r| r.0.clone()).collect()))
        .collect();
    ColoredHypergraphicalGame::new(structure, *actions, tables).map_err(|e| {
        Error::InvariantViolation { path: "tables".into(), reason: e.to_string() }
    })
}

/// Converts a `hom_instance` document into a [`HomInstance`].
pub fn hom_instance_from_doc(doc: &Document) -> Result<HomInstance> {
    let Document::HomInstance { left, right, .. } = doc else {
        return Err(wrong_kind("hom_instance", doc));
    };
    Ok(HomInstance {
        left: hypergraph_from_parts(&left.vertices, &left.edges)?,
        right: hypergraph_from_parts(&right.vertices, &right.edges)?,
    })
}

/// Converts a `decomposition` document into its vertex universe and a
/// [`TreeDecomposition`] over vertex indices; checks tree shape, coverage
/// of the declared vertices, and the running-intersection property.
pub fn decomposition_from_doc(doc: &Document) -> Result<(Vec<String>, TreeDecomposition)> {
    let Document::Decomposition { vertices, bags, edges, .. } = doc else {
        return Err(wrong_kind("decomposition", doc));
    };
    let index = check_declared(vertices, "vertices")?;
    let mut bag_indices = Vec::with_capacity(bags.len());
    for (k, bag) in bags.iter().enumerate() {
        let mut ids = Vec::with_capacity(bag.len());
        for (i, v) in bag.iter().enumerate() {
            match index.get(v) {
                Some(&ix) => ids.push(ix),
                None => {
                    return Err(Error::SchemaViolation {
                        path: format!("bags[{k}][{i}]"),
                        reason: format!("bag entry {v:?} is not a declared vertex"),
                    })
                }
            }
        }
        bag_indices.push(ids);
    }
    for (k, &(a, b)) in edges.iter().enumerate() {
        if a >= bags.len() || b >= bags.len() {
            return Err(Error::SchemaViolation {
                path: format!("edges[{k}]"),
                reason: format!("tree edge ({a}, {b}) references a missing bag"),
            });
        }
    }
    let td = TreeDecomposition::new(bag_indices, edges.clone());
    // An edgeless graph over the same vertices checks everything except
    // edge coverage, which depends on a companion graph we don't have here.
    let skeleton = UndirectedGraph::new(vertices.clone(), Vec::new())
        .map_err(|e| Error::InvariantViolation { path: "vertices".into(), reason: e.to_string() })?;
    validate_decomposition(&skeleton, &td).map_err(|v| Error::InvariantViolation {
        path: "bags".into(),
        reason: v.to_string(),
    })?;
    Ok((vertices.clone(), td))
}

fn wrong_kind(wanted: &str, got: &Document) -> Error {
    Error::SchemaViolation {
        path: "kind".into(),
        reason: format!("expected a {wanted} document, got {:?}", got.kind_name()),
    }
}

/// Wraps a [`Digraph`] as a document.
pub fn digraph_doc(g: &Digraph) -> Document {
    Document::Digraph {
        version: FORMAT_VERSION.into(),
        vertices: g.vertex_ids().to_vec(),
        arcs: g
            .arcs()
            .iter()
            .map(|&(u, w)| (g.id(u).to_string(), g.id(w).to_string()))
            .collect(),
    }
}

fn hypergraph_body(h: &ColoredHypergraph) -> HypergraphBody {
    HypergraphBody {
        vertices: h.vertex_ids().to_vec(),
        edges: h
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                tuple: e.tuple.iter().map(|&v| h.id(v).to_string()).collect(),
                color: e.color.clone(),
            })
            .collect(),
    }
}

/// Wraps a [`ColoredHypergraph`] as a document.
pub fn hypergraph_doc(h: &ColoredHypergraph) -> Document {
    let body = hypergraph_body(h);
    Document::Hypergraph {
        version: FORMAT_VERSION.into(),
        vertices: body.vertices,
        edges: body.edges,
    }
}

/// Wraps a [`GraphicalGame`] as a document.
pub fn graphical_game_doc(game: &GraphicalGame) -> Document {
    let g = game.graph();
    let n = g.vertex_count();
    Document::GraphicalGame {
        version: FORMAT_VERSION.into(),
        vertices: g.vertex_ids().to_vec(),
        arcs: g
            .arcs()
            .iter()
            .map(|&(u, w)| (g.id(u).to_string(), g.id(w).to_string()))
            .collect(),
        actions: (0..n).map(|p| game.actions(p).to_vec()).collect(),
        tables: (0..n)
            .map(|p| game.table(p).iter().map(|r| Rat(r.clone())).collect())
            .collect(),
    }
}

/// Wraps a [`ColoredHypergraphicalGame`] as a document.
pub fn chg_doc(game: &ColoredHypergraphicalGame) -> Document {
    let body = hypergraph_body(game.hypergraph());
    Document::Chg {
        version: FORMAT_VERSION.into(),
        vertices: body.vertices,
        edges: body.edges,
        actions: game.action_total(),
        tables: game
            .tables()
            .iter()
            .map(|(c, t)| (c.clone(), t.iter().map(|r| Rat(r.clone())).collect()))
            .collect(),
    }
}

/// Wraps a [`HomInstance`] as a document.
pub fn hom_instance_doc(inst: &HomInstance) -> Document {
    Document::HomInstance {
        version: FORMAT_VERSION.into(),
        left: hypergraph_body(&inst.left),
        right: hypergraph_body(&inst.right),
    }
}

/// Wraps a [`TreeDecomposition`] over the given vertex universe as a
/// document.
pub fn decomposition_doc(vertices: &[String], td: &TreeDecomposition) -> Document {
    Document::Decomposition {
        version: FORMAT_VERSION.into(),
        vertices: vertices.to_vec(),
        bags: td
            .bags()
            .iter()
            .map(|bag| bag.iter().map(|&v| vertices[v].clone()).collect())
            .collect(),
        edges: td.edges().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::rat;

    #[test]
    fn minimal_digraph_document_parses() {
        let text = r#"{"kind":"digraph","version":"1","vertices":["a","b"],"arcs":[["a","b"]]}"#;
        let doc = parse(text).unwrap();
        let g = digraph_from_doc(&doc).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1)]);
    }

    #[test]
    fn undeclared_arc_endpoint_is_a_schema_violation_with_a_path() {
        let text = r#"{"kind":"digraph","version":"1","vertices":["a"],"arcs":[["a","zz"]]}"#;
        match parse(text) {
            Err(Error::SchemaViolation { path, reason }) => {
                assert_eq!(path, "arcs[0]");
                assert!(reason.contains("zz"), "reason was {reason:?}");
            }
            other => panic!("expected a schema violation, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_is_distinguished_from_schema_errors() {
        assert!(matches!(parse("{nope"), Err(Error::MalformedDocument(_))));
        let wrong_type = r#"{"kind":"digraph","version":"1","vertices":"a","arcs":[]}"#;
        assert!(matches!(parse(wrong_type), Err(Error::SchemaViolation { .. })));
        let unknown_kind = r#"{"kind":"mystery","version":"1"}"#;
        assert!(matches!(parse(unknown_kind), Err(Error::SchemaViolation { .. })));
    }

    #[test]
    fn rationals_normalize_accept_integers_and_reject_floats() {
        let doc: Rat = serde_json::from_str("\"2/4\"").unwrap();
        assert_eq!(doc.0, rat(1, 2));
        assert_eq!(serde_json::to_string(&doc).unwrap(), "\"1/2\"");
        let whole: Rat = serde_json::from_str("-3").unwrap();
        assert_eq!(serde_json::to_string(&whole).unwrap(), "\"-3\"");
        assert!(serde_json::from_str::<Rat>("0.5").is_err());
        assert!(serde_json::from_str::<Rat>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<Rat>("\"1/-2\"").is_err());
        assert!(serde_json::from_str::<Rat>("\"x\"").is_err());
    }

    #[test]
    fn serialization_is_canonical_for_equal_games() {
        let build = || {
            let g = Digraph::new(vec!["a", "b"], vec![("a", "b")]).unwrap();
            GraphicalGame::new(
                g,
                vec![vec!["x".into()], vec!["x".into(), "y".into()]],
                vec![vec![rat(2, 4)], vec![rat(0, 1), rat(1, 1)]],
            )
            .unwrap()
        };
        let one = serialize(&graphical_game_doc(&build()));
        let two = serialize(&graphical_game_doc(&build()));
        assert_eq!(one, two);
        assert!(one.contains("\"1/2\""), "rationals are emitted in lowest terms");
        assert!(one.ends_with('\n'));
    }

    #[test]
    fn documents_round_trip_through_serialization() {
        let g = Digraph::new(vec!["a", "b", "c"], vec![("a", "b"), ("b", "c"), ("c", "a")])
            .unwrap();
        let game = crate::gadgets::strongly_connected_game(&g).unwrap();
        let doc = chg_doc(&game);
        let reparsed = parse(&serialize(&doc)).unwrap();
        assert_eq!(doc, reparsed);
        let game2 = chg_from_doc(&reparsed).unwrap();
        assert_eq!(game.tables(), game2.tables());
    }

    #[test]
    fn sigma_membership_failures_are_invariant_violations() {
        // Vertex "b" heads no edge, so this cannot be a game structure.
        let text = r#"{
            "kind": "chg", "version": "1",
            "vertices": ["a", "b"],
            "edges": [{"tuple": ["a", "b"], "color": "c"}],
            "actions": 2,
            "tables": {"c": ["0", "0", "0", "0"]}
        }"#;
        assert!(matches!(parse(text), Err(Error::InvariantViolation { path, .. }) if path == "edges"));
    }

    #[test]
    fn chg_table_sizes_are_checked_with_paths() {
        let text = r#"{
            "kind": "chg", "version": "1",
            "vertices": ["a"],
            "edges": [{"tuple": ["a"], "color": "c"}],
            "actions": 2,
            "tables": {"c": ["0"]}
        }"#;
        match parse(text) {
            Err(Error::SchemaViolation { path, .. }) => assert_eq!(path, "tables.c"),
            other => panic!("expected a schema violation, got {other:?}"),
        }
    }

    #[test]
    fn result_documents_nest_and_round_trip() {
        let g = Digraph::new(vec!["a"], Vec::<(&str, &str)>::new()).unwrap();
        let doc = Document::Result {
            version: FORMAT_VERSION.into(),
            result: CommandResult::Reduce {
                reduced: Box::new(digraph_doc(&g)),
                rounds: vec![vec!["b".into()]],
                kept: vec!["a".into()],
            },
        };
        let reparsed = parse(&serialize(&doc)).unwrap();
        assert_eq!(doc, reparsed);
    }

    #[test]
    fn decomposition_documents_validate_their_shape() {
        let good = r#"{
            "kind": "decomposition", "version": "1",
            "vertices": ["a", "b", "c"],
            "bags": [["a", "b"], ["b", "c"]],
            "edges": [[0, 1]]
        }"#;
        let (names, td) = decomposition_from_doc(&parse(good).unwrap()).unwrap();
        assert_eq!(names.len(), 3);
        assert_eq!(td.width(), 1);

        // Splitting "b" across disconnected bags breaks running intersection.
        let broken = r#"{
            "kind": "decomposition", "version": "1",
            "vertices": ["a", "b", "c"],
            "bags": [["a", "b"], ["c"], ["b"]],
            "edges": [[0, 1], [1, 2]]
        }"#;
        assert!(matches!(parse(broken), Err(Error::InvariantViolation { .. })));
    }
}
