use std::sync::Arc;

use thiserror::Error;

use crate::gog::{EdgeId, EdgePath, Graph, OEdge, PathBuilder, VertexId};
use crate::groups::{same_group, FiniteGroup, GroupIso};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map has {found} {what}, expected {expected}")]
    WrongArity { what: &'static str, expected: usize, found: usize },
    #[error("vertex {vertex}: {reason}")]
    BadVertex { vertex: String, reason: String },
    #[error("edge {edge}: {reason}")]
    BadImage { edge: String, reason: String },
}

/// A morphism of graphs of groups: vertices to vertices, vertex groups by
/// isomorphisms, edges to edge paths. Used for representatives, markings and
/// the substitutions carried by moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    pub vertex_map: Vec<VertexId>,
    pub vertex_homs: Vec<GroupIso>,
    pub edge_images: Vec<EdgePath>,
}

impl GraphMap {
    pub fn identity(g: &Graph) -> GraphMap {
        GraphMap {
            vertex_map: g.vertex_ids().collect(),
            vertex_homs: g.vertices.iter().map(|v| GroupIso::identity(&v.group)).collect(),
            edge_images: g.oedges().filter(|o| !o.is_reversed()).map(|o| EdgePath::edge(g, o)).collect(),
        }
    }

    pub fn validate(&self, src: &Graph, dst: &Graph) -> Result<(), MapError> {
        let arity = |what, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(MapError::WrongArity { what, expected, found })
            }
        };
        arity("vertex images", src.num_vertices(), self.vertex_map.len())?;
        arity("vertex homomorphisms", src.num_vertices(), self.vertex_homs.len())?;
        arity("edge images", src.num_edges(), self.edge_images.len())?;
        for v in src.vertex_ids() {
            let name = src.vertices[v.0].name.clone();
            let w = self.vertex_map[v.0];
            if w.0 >= dst.num_vertices() {
                return Err(MapError::BadVertex { vertex: name, reason: "image out of range".into() });
            }
            let h = &self.vertex_homs[v.0];
            if !same_group(h.source(), src.group(v)) || !same_group(h.target(), dst.group(w)) {
                return Err(MapError::BadVertex { vertex: name, reason: "homomorphism has the wrong groups".into() });
            }
            if !src.is_trivial(v) && h.source().order() != h.target().order() {
                return Err(MapError::BadVertex { vertex: name, reason: "vertex map is not an isomorphism".into() });
            }
        }
        for e in src.edge_ids() {
            let p = &self.edge_images[e.0];
            let name = src.edges[e.0].name.clone();
            p.validate(dst).map_err(|err| MapError::BadImage { edge: name.clone(), reason: err.to_string() })?;
            let ed = src.edge(e);
            if p.start() != self.vertex_map[ed.from.0] || p.end(dst) != self.vertex_map[ed.to.0] {
                return Err(MapError::BadImage { edge: name, reason: "image endpoints disagree with the vertex map".into() });
            }
        }
        Ok(())
    }

    pub fn image(&self, src: &Graph, dst: &Graph, o: OEdge) -> EdgePath {
        let p = &self.edge_images[o.edge().0];
        let _ = src;
        if o.is_reversed() {
            p.reverse(dst)
        } else {
            p.clone()
        }
    }

    pub fn forward_image(&self, e: EdgeId) -> &EdgePath {
        &self.edge_images[e.0]
    }

    /// Push the image of an oriented edge onto a builder.
    pub fn push_oedge(&self, dst: &Graph, b: &mut PathBuilder<'_>, o: OEdge) {
        let p = &self.edge_images[o.edge().0];
        if !o.is_reversed() {
            b.push_path(p);
            return;
        }
        let n = p.len();
        let (elems, edges) = (p.elems(), p.edges());
        let grp = |i: usize| dst.group(p.slot_vertex(dst, i));
        b.push_elem(grp(n).inv(elems[n]));
        for i in (0..n).rev() {
            b.push_edge(edges[i].rev());
            b.push_elem(grp(i).inv(elems[i]));
        }
    }

    pub fn push_path(&self, src: &Graph, dst: &Graph, b: &mut PathBuilder<'_>, p: &EdgePath) {
        for (i, &x) in p.elems().iter().enumerate() {
            let v = p.slot_vertex(src, i);
            b.push_elem(self.vertex_homs[v.0].apply(x));
            if i < p.len() {
                self.push_oedge(dst, b, p.edges()[i]);
            }
        }
    }

    /// f♯(p): substitute and tighten.
    pub fn apply(&self, src: &Graph, dst: &Graph, p: &EdgePath) -> EdgePath {
        let mut b = PathBuilder::tight(dst, self.vertex_map[p.start().0]);
        self.push_path(src, dst, &mut b, p);
        b.finish()
    }

    /// Substitution without tightening.
    pub fn apply_raw(&self, src: &Graph, dst: &Graph, p: &EdgePath) -> EdgePath {
        let mut b = PathBuilder::raw(dst, self.vertex_map[p.start().0]);
        self.push_path(src, dst, &mut b, p);
        b.finish()
    }

    /// `next ∘ self`, with tightened images.
    pub fn then(&self, src: &Graph, mid: &Graph, next: &GraphMap, dst: &Graph) -> GraphMap {
        GraphMap {
            vertex_map: self.vertex_map.iter().map(|w| next.vertex_map[w.0]).collect(),
            vertex_homs: self
                .vertex_homs
                .iter()
                .zip(&self.vertex_map)
                .map(|(h, w)| compose_homs(h, &next.vertex_homs[w.0]))
                .collect(),
            edge_images: self.edge_images.iter().map(|p| next.apply(mid, dst, p)).collect(),
        }
        .checked(src, dst)
    }

    /// `next ∘ self` by raw substitution.
    pub fn then_raw(&self, src: &Graph, mid: &Graph, next: &GraphMap, dst: &Graph) -> GraphMap {
        GraphMap {
            vertex_map: self.vertex_map.iter().map(|w| next.vertex_map[w.0]).collect(),
            vertex_homs: self
                .vertex_homs
                .iter()
                .zip(&self.vertex_map)
                .map(|(h, w)| compose_homs(h, &next.vertex_homs[w.0]))
                .collect(),
            edge_images: self.edge_images.iter().map(|p| next.apply_raw(mid, dst, p)).collect(),
        }
        .checked(src, dst)
    }

    fn checked(self, src: &Graph, dst: &Graph) -> GraphMap {
        debug_assert!(self.validate(src, dst).is_ok(), "{:?}", self.validate(src, dst));
        self
    }

    pub fn tighten(&mut self, dst: &Graph) {
        for p in &mut self.edge_images {
            *p = p.tighten(dst);
        }
    }

    /// Edges whose images are trivial paths.
    pub fn trivial_edges(&self) -> Vec<EdgeId> {
        (0..self.edge_images.len()).filter(|&i| self.edge_images[i].is_empty()).map(EdgeId).collect()
    }
}

/// `second ∘ first` where the first may be the map out of a trivial group.
pub fn compose_homs(first: &GroupIso, second: &GroupIso) -> GroupIso {
    if first.source().is_trivial() {
        return GroupIso::from_trivial(first.source(), second.target());
    }
    first.then(second)
}

/// The vertex homomorphism for a vertex of `src` mapped into `dst`'s vertex `w`:
/// the identity when the groups agree, the trivial map for a trivial source.
pub fn carry_hom(src_group: &Arc<FiniteGroup>, dst_group: &Arc<FiniteGroup>) -> GroupIso {
    if src_group.is_trivial() {
        GroupIso::from_trivial(src_group, dst_group)
    } else {
        debug_assert!(same_group(src_group, dst_group));
        GroupIso::new(src_group, dst_group, src_group.elements().collect()).expect("identical groups")
    }
}
