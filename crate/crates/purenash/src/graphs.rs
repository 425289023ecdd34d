//! Directed graphs, colored hypergraphs, and the structural views connecting
//! them: induced digraphs, induced hypergraphs, primal graphs, and strongly
//! connected components.
//!
//! Vertices are identified by strings. Wherever an operation needs a total
//! order on vertices ("in-neighbors in ascending order"), the byte-wise
//! order of the vertex ids is used. Declaration order is preserved for
//! enumeration, so parsing and re-serializing a structure is the identity.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};

fn build_index(vertices: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(Error::InvalidStructure(format!("duplicate vertex {v:?}")));
        }
    }
    Ok(index)
}

/// A finite simple directed graph: no self-loops, no parallel arcs.
/// Antiparallel pairs (u→v and v→u) are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<(usize, usize)>,
    in_nbrs: Vec<Vec<usize>>,
    out_nbrs: Vec<Vec<usize>>,
}

impl Digraph {
    /// Builds a digraph from named vertices and (source, target) arcs.
    /// Rejects duplicate vertices, arcs with undeclared endpoints,
    /// self-loops, and duplicate arcs.
    pub fn new<S: Into<String>>(vertices: Vec<S>, arcs: Vec<(S, S)>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&vertices)?;
        let mut seen = HashSet::new();
        let mut pairs = Vec::with_capacity(arcs.len());
        for (s, t) in arcs {
            let (s, t) = (s.into(), t.into());
            let si = *index
                .get(&s)
                .ok_or_else(|| Error::InvalidStructure(format!("arc source {s:?} is not a declared vertex")))?;
            let ti = *index
                .get(&t)
                .ok_or_else(|| Error::InvalidStructure(format!("arc target {t:?} is not a declared vertex")))?;
            if si == ti {
                return Err(Error::InvalidStructure(format!("self-loop at {s:?}")));
            }
            if !seen.insert((si, ti)) {
                return Err(Error::InvalidStructure(format!("duplicate arc ({s:?}, {t:?})")));
            }
            pairs.push((si, ti));
        }
        pairs.sort_unstable();
        let mut in_nbrs = vec![Vec::new(); vertices.len()];
        let mut out_nbrs = vec![Vec::new(); vertices.len()];
        for &(s, t) in &pairs {
            out_nbrs[s].push(t);
            in_nbrs[t].push(s);
        }
        // Adjacency in ascending id order, the crate-wide canonical order.
        let by_id = |list: &mut Vec<usize>| list.sort_unstable_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        in_nbrs.iter_mut().for_each(&by_id);
        out_nbrs.iter_mut().for_each(by_id);
        Ok(Digraph { vertices, index, arcs: pairs, in_nbrs, out_nbrs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Arcs as (source, target) index pairs, sorted.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// In-neighbors of `v` in ascending id order.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_nbrs[v]
    }

    /// Out-neighbors of `v` in ascending id order.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_nbrs[v]
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_nbrs[v].is_empty()
    }

    /// The subgraph induced by `keep` (original indices, any order). Vertex
    /// declaration order is preserved.
    pub fn subgraph(&self, keep: &[usize]) -> Digraph {
        let keep_set: HashSet<usize> = keep.iter().copied().collect();
        let mut kept: Vec<usize> = keep_set.iter().copied().collect();
        kept.sort_unstable();
        let vertices: Vec<String> = kept.iter().map(|&v| self.vertices[v].clone()).collect();
        let arcs: Vec<(String, String)> = self
            .arcs
            .iter()
            .filter(|(s, t)| keep_set.contains(s) && keep_set.contains(t))
            .map(|&(s, t)| (self.vertices[s].clone(), self.vertices[t].clone()))
            .collect();
        Digraph::new(vertices, arcs).expect("a subgraph of a valid digraph is valid")
    }
}

/// A finite simple undirected graph, used for primal graphs and tree
/// decompositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    nbrs: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Builds an undirected graph. Self-loops and undeclared endpoints are
    /// rejected; duplicate edges are merged silently.
    pub fn new<S: Into<String>>(vertices: Vec<S>, edges: Vec<(S, S)>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&vertices)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let ai = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidStructure(format!("edge endpoint {a:?} is not a declared vertex")))?;
            let bi = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidStructure(format!("edge endpoint {b:?} is not a declared vertex")))?;
            if ai == bi {
                return Err(Error::InvalidStructure(format!("self-loop at {a:?}")));
            }
            set.insert((ai.min(bi), ai.max(bi)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut nbrs = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        nbrs.iter_mut().for_each(|l| l.sort_unstable());
        Ok(UndirectedGraph { vertices, index, edges, nbrs })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges as (min, max) index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in ascending index order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.nbrs[a].binary_search(&b).is_ok()
    }
}

/// One hyperedge: an ordered tuple of vertex indices plus a color. Tuples
/// may repeat vertices (needed for edges that encode best responses such as
/// "imitate"), but game structures add a distinctness requirement via
/// [`GameHypergraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub tuple: Vec<usize>,
    pub color: String,
}

/// A colored hypergraph: ordered hyperedges, each carrying a color, where
/// edges of equal color have equal arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Hyperedge>,
}

impl ColoredHypergraph {
    /// Builds a colored hypergraph from named vertices and (tuple, color)
    /// edges. Rejects duplicate vertices, undeclared tuple entries, empty
    /// tuples, arity mismatches within one color, and exact duplicate
    /// (tuple, color) pairs.
    pub fn new<S: Into<String>>(vertices: Vec<S>, edges: Vec<(Vec<S>, S)>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&vertices)?;
        let mut arity: HashMap<String, usize> = HashMap::new();
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (tuple, color) in edges {
            let color: String = color.into();
            let tuple: Vec<String> = tuple.into_iter().map(Into::into).collect();
            if tuple.is_empty() {
                return Err(Error::InvalidStructure(format!("empty tuple for color {color:?}")));
            }
            let mut idx_tuple = Vec::with_capacity(tuple.len());
            for name in &tuple {
                let i = *index.get(name).ok_or_else(|| {
                    Error::InvalidStructure(format!("edge entry {name:?} is not a declared vertex"))
                })?;
                idx_tuple.push(i);
            }
            match arity.get(&color) {
                Some(&r) if r != idx_tuple.len() => {
                    return Err(Error::InvalidStructure(format!(
                        "color {color:?} used with arities {r} and {}",
                        idx_tuple.len()
                    )));
                }
                Some(_) => {}
                None => {
                    arity.insert(color.clone(), idx_tuple.len());
                }
            }
            if !seen.insert((idx_tuple.clone(), color.clone())) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate edge {tuple:?} with color {color:?}"
                )));
            }
            out.push(Hyperedge { tuple: idx_tuple, color });
        }
        Ok(ColoredHypergraph { vertices, index, edges: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Colors in ascending order, deduplicated.
    pub fn colors(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.edges.iter().map(|e| e.color.as_str()).collect();
        set.into_iter().collect()
    }

    /// Arity of a color, if any edge carries it.
    pub fn arity_of(&self, color: &str) -> Option<usize> {
        self.edges.iter().find(|e| e.color == color).map(|e| e.tuple.len())
    }

    /// The substructure induced by `keep` (original indices, any order):
    /// the kept vertices in original order plus every edge whose entries all
    /// survive.
    pub fn induced(&self, keep: &[usize]) -> ColoredHypergraph {
        let keep_set: HashSet<usize> = keep.iter().copied().collect();
        let mut kept: Vec<usize> = keep_set.iter().copied().collect();
        kept.sort_unstable();
        let remap: HashMap<usize, usize> = kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let vertices: Vec<String> = kept.iter().map(|&v| self.vertices[v].clone()).collect();
        let index = build_index(&vertices).expect("vertex subset keeps ids unique");
        let edges: Vec<Hyperedge> = self
            .edges
            .iter()
            .filter(|e| e.tuple.iter().all(|v| keep_set.contains(v)))
            .map(|e| Hyperedge {
                tuple: e.tuple.iter().map(|v| remap[v]).collect(),
                color: e.color.clone(),
            })
            .collect();
        ColoredHypergraph { vertices, index, edges }
    }
}

/// A colored hypergraph that can carry a game: every vertex is the first
/// entry of exactly one edge (its local scope), and tuples never repeat a
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameHypergraph {
    inner: ColoredHypergraph,
    edge_of: Vec<usize>,
}

impl GameHypergraph {
    pub fn new(h: ColoredHypergraph) -> Result<Self> {
        let mut edge_of = vec![usize::MAX; h.vertex_count()];
        for (i, e) in h.edges().iter().enumerate() {
            let mut distinct = HashSet::new();
            for &v in &e.tuple {
                if !distinct.insert(v) {
                    return Err(Error::InvalidStructure(format!(
                        "edge {i} repeats vertex {:?}; game scopes must be sets",
                        h.id(v)
                    )));
                }
            }
            let first = e.tuple[0];
            if edge_of[first] != usize::MAX {
                return Err(Error::InvalidStructure(format!(
                    "vertex {:?} heads more than one edge",
                    h.id(first)
                )));
            }
            edge_of[first] = i;
        }
        if let Some(v) = edge_of.iter().position(|&e| e == usize::MAX) {
            return Err(Error::InvalidStructure(format!(
                "vertex {:?} heads no edge",
                h.id(v)
            )));
        }
        Ok(GameHypergraph { inner: h, edge_of })
    }

    pub fn hypergraph(&self) -> &ColoredHypergraph {
        &self.inner
    }

    pub fn into_hypergraph(self) -> ColoredHypergraph {
        self.inner
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    /// The unique edge headed by `v`: its tuple is `v`'s local scope, `v`
    /// first.
    pub fn edge_of_vertex(&self, v: usize) -> &Hyperedge {
        &self.inner.edges()[self.edge_of[v]]
    }
}

/// Builds the digraph induced by a game hypergraph: each edge
/// (v, v1, .., vr) contributes the arcs vi → v.
pub fn induced_digraph(g: &GameHypergraph) -> Digraph {
    let h = g.hypergraph();
    let mut arcs = Vec::new();
    for e in h.edges() {
        let head = e.tuple[0];
        for &src in &e.tuple[1..] {
            arcs.push((h.id(src).to_string(), h.id(head).to_string()));
        }
    }
    Digraph::new(h.vertex_ids().to_vec(), arcs)
        .expect("distinct scope entries never produce self-loops or duplicate arcs")
}

/// Builds the hypergraph induced by a digraph: one edge per vertex, the
/// vertex first and its in-neighbors following in ascending id order, with
/// a fresh color (the vertex's own id) per edge.
pub fn induced_hypergraph(g: &Digraph) -> GameHypergraph {
    let mut edges = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let mut tuple = vec![g.id(v).to_string()];
        tuple.extend(g.in_neighbors(v).iter().map(|&u| g.id(u).to_string()));
        edges.push((tuple, g.id(v).to_string()));
    }
    let h = ColoredHypergraph::new(g.vertex_ids().to_vec(), edges)
        .expect("simple digraphs induce valid hypergraphs");
    GameHypergraph::new(h).expect("one edge per vertex, no repeats")
}

/// Builds the primal graph of a colored hypergraph: same vertices, an
/// undirected edge for every pair of distinct vertices sharing a hyperedge.
pub fn primal_graph(h: &ColoredHypergraph) -> UndirectedGraph {
    let mut edges = Vec::new();
    for e in h.edges() {
        for (k, &a) in e.tuple.iter().enumerate() {
            for &b in &e.tuple[k + 1..] {
                if a != b {
                    edges.push((h.id(a).to_string(), h.id(b).to_string()));
                }
            }
        }
    }
    UndirectedGraph::new(h.vertex_ids().to_vec(), edges)
        .expect("primal edges connect declared, distinct vertices")
}

/// Strongly connected components in topological order of the condensation:
/// every arc between distinct components goes from an earlier to a later
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
    terminal: Vec<bool>,
}

impl SccPartition {
    /// Components in condensation-topological order; vertices within each
    /// component are in ascending index order.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// Whether component `c` has no arc leaving it.
    pub fn is_terminal(&self, c: usize) -> bool {
        self.terminal[c]
    }

    pub fn terminal_components(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.components.len()).filter(|&c| self.terminal[c])
    }
}

struct TarjanState<'g> {
    g: &'g Digraph,
    index: Vec<usize>,
    lowlink: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next_index: usize,
    components: Vec<Vec<usize>>,
}

impl TarjanState<'_> {
    fn strongconnect(&mut self, v: usize) {
        self.index[v] = self.next_index;
        self.lowlink[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in self.g.out_neighbors(v) {
            if self.index[w] == usize::MAX {
                self.strongconnect(w);
                self.lowlink[v] = self.lowlink[v].min(self.lowlink[w]);
            } else if self.on_stack[w] {
                self.lowlink[v] = self.lowlink[v].min(self.index[w]);
            }
        }
        if self.lowlink[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("component root is on the stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.components.push(comp);
        }
    }
}

/// Computes the strongly connected components of `g` with Tarjan's
/// algorithm. Deterministic: roots are tried in vertex order and adjacency
/// is ordered, and the emitted component order is reversed so the result is
/// topological.
pub fn scc(g: &Digraph) -> SccPartition {
    let n = g.vertex_count();
    let mut st = TarjanState {
        g,
        index: vec![usize::MAX; n],
        lowlink: vec![usize::MAX; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next_index: 0,
        components: Vec::new(),
    };
    for v in 0..n {
        if st.index[v] == usize::MAX {
            st.strongconnect(v);
        }
    }
    // Tarjan emits a component only after everything reachable from it, so
    // reversing yields topological order of the condensation.
    st.components.reverse();
    let mut component_of = vec![usize::MAX; n];
    for (c, comp) in st.components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut terminal = vec![true; st.components.len()];
    for &(s, t) in g.arcs() {
        if component_of[s] != component_of[t] {
            terminal[component_of[s]] = false;
        }
    }
    SccPartition { components: st.components, component_of, terminal }
}

/// Whether `g` has no sinks. The empty digraph is vacuously irreducible.
pub fn is_irreducible(g: &Digraph) -> bool {
    (0..g.vertex_count()).all(|v| !g.is_sink(v))
}
