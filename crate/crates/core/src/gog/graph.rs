use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::FiniteGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// An oriented edge: the declared orientation of `edge`, or its reverse.
/// Ordered by `(edge id, reversed)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OEdge(usize);

impl OEdge {
    pub fn new(e: EdgeId, reversed: bool) -> OEdge {
        OEdge(2 * e.0 + reversed as usize)
    }

    pub fn fwd(e: EdgeId) -> OEdge {
        OEdge::new(e, false)
    }

    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    pub fn is_reversed(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn rev(self) -> OEdge {
        OEdge(self.0 ^ 1)
    }

    pub fn raw(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    pub group: Arc<FiniteGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} has an endpoint out of range")]
    BadEndpoint(String),
    #[error("duplicate name {0}")]
    DuplicateName(String),
}

/// A finite connected graph of groups with trivial edge groups.
#[derive(Debug, Clone)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// η, β, complexity and the edge bound of a graph of groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphInvariants {
    pub eta: i64,
    pub beta: i64,
    pub complexity: i64,
    pub edge_bound: i64,
}

impl Graph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Graph, GraphError> {
        let g = Graph { vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut names = HashSet::new();
        for v in &self.vertices {
            if !names.insert(v.name.as_str()) {
                return Err(GraphError::DuplicateName(v.name.clone()));
            }
        }
        let mut enames = HashSet::new();
        for e in &self.edges {
            if !enames.insert(e.name.as_str()) {
                return Err(GraphError::DuplicateName(e.name.clone()));
            }
            if e.from.0 >= self.vertices.len() || e.to.0 >= self.vertices.len() {
                return Err(GraphError::BadEndpoint(e.name.clone()));
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn oedges(&self) -> impl Iterator<Item = OEdge> {
        (0..2 * self.edges.len()).map(OEdge)
    }

    pub fn group(&self, v: VertexId) -> &Arc<FiniteGroup> {
        &self.vertices[v.0].group
    }

    pub fn is_trivial(&self, v: VertexId) -> bool {
        self.vertices[v.0].group.is_trivial()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    /// Terminal vertex τ(o).
    pub fn term(&self, o: OEdge) -> VertexId {
        let e = &self.edges[o.edge().0];
        if o.is_reversed() {
            e.from
        } else {
            e.to
        }
    }

    pub fn origin(&self, o: OEdge) -> VertexId {
        self.term(o.rev())
    }

    /// st(v): oriented edges terminating at `v`, in increasing order.
    pub fn star(&self, v: VertexId) -> Vec<OEdge> {
        self.oedges().filter(|&o| self.term(o) == v).collect()
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn oedge_name(&self, o: OEdge) -> String {
        let n = &self.edges[o.edge().0].name;
        if o.is_reversed() {
            format!("~{n}")
        } else {
            n.clone()
        }
    }

    pub fn is_connected(&self) -> bool {
        let all: BTreeSet<EdgeId> = self.edge_ids().collect();
        let comps = self.components_with_vertices(&all, true);
        comps.len() == 1
    }

    pub fn invariants(&self) -> GraphInvariants {
        let eta = self.vertices.iter().filter(|v| !v.group.is_trivial()).count() as i64;
        let beta = self.edges.len() as i64 - self.vertices.len() as i64 + 1;
        GraphInvariants { eta, beta, complexity: eta + 2 * beta - 1, edge_bound: 2 * eta + 3 * beta - 3 }
    }

    /// Vertices incident to an edge set.
    pub fn incident_vertices(&self, edges: &BTreeSet<EdgeId>) -> BTreeSet<VertexId> {
        edges.iter().flat_map(|&e| [self.edges[e.0].from, self.edges[e.0].to]).collect()
    }

    /// Connected components of the subgraph spanned by `edges`, each as (vertices, edges).
    /// With `include_isolated`, vertices not touching `edges` form singleton components.
    pub fn components_with_vertices(
        &self,
        edges: &BTreeSet<EdgeId>,
        include_isolated: bool,
    ) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(EdgeId, VertexId)>> = vec![Vec::new(); n];
        for &e in edges {
            let ed = &self.edges[e.0];
            adj[ed.from.0].push((e, ed.to));
            adj[ed.to.0].push((e, ed.from));
        }
        let touched = self.incident_vertices(edges);
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || (!include_isolated && !touched.contains(&VertexId(start))) {
                continue;
            }
            let mut vs = BTreeSet::new();
            let mut es = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                vs.insert(VertexId(v));
                for &(e, w) in &adj[v] {
                    es.insert(e);
                    if !seen[w.0] {
                        seen[w.0] = true;
                        queue.push_back(w.0);
                    }
                }
            }
            out.push((vs, es));
        }
        out
    }

    /// Every component is a tree with at most one vertex carrying a nontrivial group.
    pub fn is_collapsible_forest(&self, s: &Subgraph) -> bool {
        self.components_with_vertices(&s.edges, false).iter().all(|(vs, es)| {
            es.len() + 1 == vs.len() && vs.iter().filter(|&&v| !self.is_trivial(v)).count() <= 1
        })
    }

    /// Tree path from `from` to `to` inside the edge set (BFS), as oriented edges.
    pub fn path_within(&self, edges: &BTreeSet<EdgeId>, from: VertexId, to: VertexId) -> Option<Vec<OEdge>> {
        let n = self.vertices.len();
        let mut prev: Vec<Option<OEdge>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from.0] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let o = prev[cur.0].expect("bfs parent");
                    path.push(o);
                    cur = self.origin(o);
                }
                path.reverse();
                return Some(path);
            }
            for &e in edges {
                for o in [OEdge::fwd(e), OEdge::fwd(e).rev()] {
                    if self.origin(o) == v {
                        let w = self.term(o);
                        if !seen[w.0] {
                            seen[w.0] = true;
                            prev[w.0] = Some(o);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        None
    }

    /// Fresh edge name derived from `base`: its root (without primes or a `_k`
    /// suffix) with up to three primes, then `_1`, `_2`, ….
    pub fn fresh_edge_name(&self, base: &str) -> String {
        let taken = |s: &str| self.edges.iter().any(|e| e.name == s);
        let mut root = base.trim_end_matches('\'');
        if let Some((r, k)) = root.rsplit_once('_') {
            if !r.is_empty() && !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
                root = r;
            }
        }
        for primes in 1..=3 {
            let name = format!("{root}{}", "'".repeat(primes));
            if !taken(&name) {
                return name;
            }
        }
        (1..).map(|k| format!("{root}_{k}")).find(|n| !taken(n)).unwrap()
    }

    pub fn fresh_vertex_name(&self, base: &str) -> String {
        let taken = |s: &str| self.vertices.iter().any(|v| v.name == s);
        let mut k = self.vertices.len();
        loop {
            let name = format!("{base}{k}");
            if !taken(&name) {
                return name;
            }
            k += 1;
        }
    }
}

/// A set of edges together with their incident vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn new(edges: impl IntoIterator<Item = EdgeId>) -> Subgraph {
        Subgraph { edges: edges.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn vertices(&self, g: &Graph) -> BTreeSet<VertexId> {
        g.incident_vertices(&self.edges)
    }

    pub fn names(&self, g: &Graph) -> Vec<String> {
        self.edges.iter().map(|e| g.edges[e.0].name.clone()).collect()
    }
}

impl fmt::Display for GraphInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eta={} beta={} complexity={} edge_bound={}",
            self.eta, self.beta, self.complexity, self.edge_bound
        )
    }
}
