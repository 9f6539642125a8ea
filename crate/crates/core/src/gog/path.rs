use std::fmt;

use thiserror::Error;

use super::graph::{Graph, OEdge, VertexId};
use crate::groups::Elem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("path endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("path is not closed")]
    NotClosed,
    #[error("malformed path: {0}")]
    Malformed(String),
}

/// `x0 e1 x1 … en xn`: oriented edges interleaved with vertex-group elements,
/// `x0` at the start vertex and `xi` at τ(ei).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgePath {
    start: VertexId,
    elems: Vec<Elem>,
    edges: Vec<OEdge>,
}

impl EdgePath {
    pub fn trivial(v: VertexId) -> EdgePath {
        EdgePath { start: v, elems: vec![Elem::ID], edges: Vec::new() }
    }

    pub fn element(v: VertexId, x: Elem) -> EdgePath {
        EdgePath { start: v, elems: vec![x], edges: Vec::new() }
    }

    pub fn edge(g: &Graph, o: OEdge) -> EdgePath {
        EdgePath { start: g.origin(o), elems: vec![Elem::ID; 2], edges: vec![o] }
    }

    /// Edges with identity elements in every slot.
    pub fn from_edges(g: &Graph, start: VertexId, edges: &[OEdge]) -> EdgePath {
        let mut b = PathBuilder::raw(g, start);
        for &o in edges {
            b.push_edge(o);
        }
        b.finish()
    }

    /// Unvalidated construction; see [`EdgePath::validate`].
    pub fn from_parts(start: VertexId, elems: Vec<Elem>, edges: Vec<OEdge>) -> EdgePath {
        assert_eq!(elems.len(), edges.len() + 1, "an edge path has one more element slot than edges");
        EdgePath { start, elems, edges }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), PathError> {
        if self.start.0 >= g.num_vertices() {
            return Err(PathError::Malformed("start vertex out of range".into()));
        }
        let mut cur = self.start;
        for (i, &o) in self.edges.iter().enumerate() {
            if o.edge().0 >= g.num_edges() {
                return Err(PathError::Malformed("edge out of range".into()));
            }
            if g.origin(o) != cur {
                return Err(PathError::Malformed(format!("edge {} does not start at slot {i}", g.oedge_name(o))));
            }
            g.group(cur).check(self.elems[i]).map_err(|e| PathError::Malformed(e.to_string()))?;
            cur = g.term(o);
        }
        g.group(cur).check(*self.elems.last().unwrap()).map_err(|e| PathError::Malformed(e.to_string()))?;
        Ok(())
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&o| g.term(o))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// No edges and the identity element.
    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty() && self.elems[0].is_id()
    }

    pub fn is_closed(&self, g: &Graph) -> bool {
        self.end(g) == self.start
    }

    pub fn edges(&self) -> &[OEdge] {
        &self.edges
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn lead(&self) -> Elem {
        self.elems[0]
    }

    pub fn trail(&self) -> Elem {
        *self.elems.last().unwrap()
    }

    pub fn first_edge(&self) -> Option<OEdge> {
        self.edges.first().copied()
    }

    pub fn last_edge(&self) -> Option<OEdge> {
        self.edges.last().copied()
    }

    /// Vertex at element slot `i` (0 = start, i = τ(ei)).
    pub fn slot_vertex(&self, g: &Graph, i: usize) -> VertexId {
        if i == 0 {
            self.start
        } else {
            g.term(self.edges[i - 1])
        }
    }

    pub fn reverse(&self, g: &Graph) -> EdgePath {
        let n = self.edges.len();
        let edges = self.edges.iter().rev().map(|o| o.rev()).collect();
        let elems = (0..=n).rev().map(|i| g.group(self.slot_vertex(g, i)).inv(self.elems[i])).collect();
        EdgePath { start: self.end(g), elems, edges }
    }

    /// Concatenation with the junction elements multiplied; not tightened.
    pub fn concat(&self, g: &Graph, other: &EdgePath) -> Result<EdgePath, PathError> {
        if self.end(g) != other.start {
            return Err(PathError::EndpointMismatch(format!(
                "{} ends at {}, next starts at {}",
                self.display(g),
                g.vertices[self.end(g).0].name,
                g.vertices[other.start.0].name
            )));
        }
        let mut b = PathBuilder::raw(g, self.start);
        b.push_path(self);
        b.push_path(other);
        Ok(b.finish())
    }

    pub fn tighten(&self, g: &Graph) -> EdgePath {
        let mut b = PathBuilder::tight(g, self.start);
        b.push_path(self);
        b.finish()
    }

    pub fn is_tight(&self, g: &Graph) -> bool {
        self.tight_violation(g).is_none()
    }

    /// First index i with `e_i · 1 · ē_i` at slots i..i+1.
    pub fn tight_violation(&self, _g: &Graph) -> Option<usize> {
        (1..self.edges.len()).find(|&i| self.elems[i].is_id() && self.edges[i] == self.edges[i - 1].rev())
    }

    pub fn mul_left(&self, g: &Graph, x: Elem) -> EdgePath {
        let mut p = self.clone();
        p.elems[0] = g.group(self.start).mul(x, p.elems[0]);
        p
    }

    pub fn mul_right(&self, g: &Graph, x: Elem) -> EdgePath {
        let mut p = self.clone();
        let v = self.end(g);
        let last = p.elems.last_mut().unwrap();
        *last = g.group(v).mul(*last, x);
        p
    }

    /// Sub-path from element slot `i` to slot `j` (inclusive of both slot elements).
    pub fn slice(&self, g: &Graph, i: usize, j: usize) -> EdgePath {
        assert!(i <= j && j <= self.edges.len());
        EdgePath { start: self.slot_vertex(g, i), elems: self.elems[i..=j].to_vec(), edges: self.edges[i..j].to_vec() }
    }

    /// Sub-path with the boundary slot elements replaced by the identity where requested.
    pub fn slice_with(&self, g: &Graph, i: usize, j: usize, keep_lead: bool, keep_trail: bool) -> EdgePath {
        let mut p = self.slice(g, i, j);
        if !keep_lead {
            p.elems[0] = Elem::ID;
        }
        if !keep_trail {
            *p.elems.last_mut().unwrap() = Elem::ID;
        }
        p
    }

    pub fn display(&self, g: &Graph) -> String {
        PathDisplay { g, p: self }.to_string()
    }
}

pub struct PathDisplay<'a> {
    pub g: &'a Graph,
    pub p: &'a EdgePath,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, p) = (self.g, self.p);
        let mut parts = Vec::new();
        for i in 0..=p.edges.len() {
            let x = p.elems[i];
            let v = p.slot_vertex(g, i);
            if !x.is_id() || (p.edges.is_empty() && i == 0) {
                parts.push(format!("{}@{}", g.group(v).display_elem(x), g.vertices[v.0].name));
            }
            if i < p.edges.len() {
                parts.push(g.oedge_name(p.edges[i]));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Incremental path construction, optionally cancelling `e·1·ē` as it goes.
pub struct PathBuilder<'g> {
    g: &'g Graph,
    start: VertexId,
    cur: VertexId,
    elems: Vec<Elem>,
    edges: Vec<OEdge>,
    tighten: bool,
}

impl<'g> PathBuilder<'g> {
    pub fn raw(g: &'g Graph, start: VertexId) -> Self {
        PathBuilder { g, start, cur: start, elems: vec![Elem::ID], edges: Vec::new(), tighten: false }
    }

    pub fn tight(g: &'g Graph, start: VertexId) -> Self {
        PathBuilder { tighten: true, ..Self::raw(g, start) }
    }

    pub fn current(&self) -> VertexId {
        self.cur
    }

    pub fn push_elem(&mut self, x: Elem) {
        let last = self.elems.last_mut().unwrap();
        *last = self.g.group(self.cur).mul(*last, x);
    }

    pub fn push_edge(&mut self, o: OEdge) {
        assert_eq!(self.g.origin(o), self.cur, "edge {} does not continue the path", self.g.oedge_name(o));
        if self.tighten && self.elems.last().unwrap().is_id() && self.edges.last() == Some(&o.rev()) {
            self.edges.pop();
            self.elems.pop();
        } else {
            self.edges.push(o);
            self.elems.push(Elem::ID);
        }
        self.cur = self.g.term(o);
    }

    pub fn push_path(&mut self, p: &EdgePath) {
        assert_eq!(p.start, self.cur, "path does not continue the builder");
        self.push_elem(p.elems[0]);
        for (i, &o) in p.edges.iter().enumerate() {
            self.push_edge(o);
            self.push_elem(p.elems[i + 1]);
        }
    }

    pub fn finish(self) -> EdgePath {
        EdgePath { start: self.start, elems: self.elems, edges: self.edges }
    }
}
