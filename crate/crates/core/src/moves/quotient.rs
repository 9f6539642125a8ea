//! Graph quotients shared by folds and contractions: some edges deleted, some
//! vertices merged into a representative.

use std::collections::BTreeSet;

use crate::gog::{Edge, EdgeId, EdgePath, Graph, OEdge, PathBuilder, Vertex, VertexId};
use crate::rep::{carry_hom, GraphMap};

pub(crate) struct Quotient {
    pub graph: Graph,
    pub vertex_to: Vec<VertexId>,
    pub edge_to: Vec<Option<EdgeId>>,
    pub vertex_from: Vec<VertexId>,
    pub edge_from: Vec<EdgeId>,
}

/// `rep_of[v]` is the old vertex `v` is merged into (its own index if it survives);
/// the representative's group is kept.
pub(crate) fn quotient(g: &Graph, rep_of: &[VertexId], deleted: &BTreeSet<EdgeId>) -> Quotient {
    let mut vertex_to = vec![VertexId(usize::MAX); g.num_vertices()];
    let mut vertices = Vec::new();
    let mut vertex_from = Vec::new();
    for v in g.vertex_ids() {
        if rep_of[v.0] == v {
            vertex_to[v.0] = VertexId(vertices.len());
            vertices.push(Vertex { name: g.vertices[v.0].name.clone(), group: g.group(v).clone() });
            vertex_from.push(v);
        }
    }
    for v in g.vertex_ids() {
        vertex_to[v.0] = vertex_to[rep_of[v.0].0];
    }
    let mut edge_to = vec![None; g.num_edges()];
    let mut edges = Vec::new();
    let mut edge_from = Vec::new();
    for e in g.edge_ids() {
        if deleted.contains(&e) {
            continue;
        }
        let ed = g.edge(e);
        edge_to[e.0] = Some(EdgeId(edges.len()));
        edges.push(Edge { name: ed.name.clone(), from: vertex_to[ed.from.0], to: vertex_to[ed.to.0] });
        edge_from.push(e);
    }
    Quotient { graph: Graph { vertices, edges }, vertex_to, edge_to, vertex_from, edge_from }
}

impl Quotient {
    /// Old → new. `deleted_image(e)` gives the image of each deleted edge.
    pub fn forward(&self, g: &Graph, deleted_image: impl Fn(EdgeId) -> EdgePath) -> GraphMap {
        let ng = &self.graph;
        GraphMap {
            vertex_map: self.vertex_to.clone(),
            vertex_homs: g
                .vertex_ids()
                .map(|v| carry_hom(g.group(v), ng.group(self.vertex_to[v.0])))
                .collect(),
            edge_images: g
                .edge_ids()
                .map(|e| match self.edge_to[e.0] {
                    Some(ne) => EdgePath::edge(ng, OEdge::fwd(ne)),
                    None => deleted_image(e),
                })
                .collect(),
        }
    }

    /// New → old. `conn(v)` is a path in the old graph from `rep_of[v]` to `v`.
    pub fn backward(&self, g: &Graph, conn: impl Fn(VertexId) -> EdgePath) -> GraphMap {
        let ng = &self.graph;
        GraphMap {
            vertex_map: self.vertex_from.clone(),
            vertex_homs: ng
                .vertex_ids()
                .map(|v| carry_hom(ng.group(v), g.group(self.vertex_from[v.0])))
                .collect(),
            edge_images: self
                .edge_from
                .iter()
                .map(|&e| {
                    let ed = g.edge(e);
                    let into = conn(ed.from);
                    let mut b = PathBuilder::tight(g, into.start());
                    b.push_path(&into);
                    b.push_edge(OEdge::fwd(e));
                    b.push_path(&conn(ed.to).reverse(g));
                    b.finish()
                })
                .collect(),
        }
    }
}
