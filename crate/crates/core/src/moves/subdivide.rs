use std::collections::BTreeMap;

use super::{trivial_group, MoveError, MoveKind, MoveReceipt};
use crate::gog::{Edge, EdgeId, EdgePath, OEdge, Vertex, VertexId};
use crate::groups::GroupIso;
use crate::rep::{GraphMap, TopRep};

/// Subdivide `e` at the vertex between the `k`-th and `(k+1)`-th edge of its image.
pub fn subdivide(f: &TopRep, e: EdgeId, k: usize) -> Result<MoveReceipt, MoveError> {
    subdivide_many(f, &BTreeMap::from([(e, vec![k])]))
}

/// Simultaneous subdivision of several edges, each at several image positions.
///
/// The pieces of `e` are `e'` (keeping the id of `e`), then `e''`, `e'''`, … appended
/// in order. The element at a cut stays with the earlier piece.
pub fn subdivide_many(f: &TopRep, cuts: &BTreeMap<EdgeId, Vec<usize>>) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let mut plan: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (&e, ks) in cuts {
        let name = || g.edges.get(e.0).map_or_else(|| format!("#{}", e.0), |ed| ed.name.clone());
        if e.0 >= g.num_edges() {
            return Err(MoveError::PositionOutOfRange { edge: name(), position: 0, len: 0 });
        }
        let n = f.map.forward_image(e).len();
        let mut ks = ks.clone();
        ks.sort_unstable();
        ks.dedup();
        if let Some(&k) = ks.iter().find(|&&k| k == 0 || k >= n) {
            return Err(MoveError::PositionOutOfRange { edge: name(), position: k, len: n });
        }
        if !ks.is_empty() {
            plan.insert(e, ks);
        }
    }
    let triv = trivial_group(g);
    let mut ng = g.clone();
    let mut pieces: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    let mut new_vertex_image = Vec::new();
    for (&e, ks) in &plan {
        let base = g.edge(e).name.clone();
        let to = g.edge(e).to;
        let first = ng.fresh_edge_name(&base);
        ng.edges[e.0].name = first;
        let ms: Vec<VertexId> = ks
            .iter()
            .map(|&k| {
                let name = ng.fresh_vertex_name("v");
                ng.vertices.push(Vertex { name, group: triv.clone() });
                new_vertex_image.push(f.map.forward_image(e).slot_vertex(g, k));
                VertexId(ng.vertices.len() - 1)
            })
            .collect();
        ng.edges[e.0].to = ms[0];
        let mut ids = vec![e];
        for i in 0..ms.len() {
            let name = ng.fresh_edge_name(&base);
            let to_i = if i + 1 < ms.len() { ms[i + 1] } else { to };
            ng.edges.push(Edge { name, from: ms[i], to: to_i });
            ids.push(EdgeId(ng.edges.len() - 1));
        }
        pieces.insert(e, ids);
    }
    let old_v = g.num_vertices();
    let forward = GraphMap {
        vertex_map: g.vertex_ids().collect(),
        vertex_homs: g.vertices.iter().map(|v| GroupIso::identity(&v.group)).collect(),
        edge_images: g
            .edge_ids()
            .map(|e| match pieces.get(&e) {
                Some(ids) => {
                    let os: Vec<OEdge> = ids.iter().map(|&i| OEdge::fwd(i)).collect();
                    EdgePath::from_edges(&ng, g.edge(e).from, &os)
                }
                None => EdgePath::edge(&ng, OEdge::fwd(e)),
            })
            .collect(),
    };
    // New vertices go to the terminal vertex of the subdivided edge; later pieces collapse there.
    let mut back_vertex: Vec<VertexId> = g.vertex_ids().collect();
    let mut back_edge: Vec<EdgePath> = g.edge_ids().map(|e| EdgePath::edge(g, OEdge::fwd(e))).collect();
    for (&e, ids) in &pieces {
        let to = g.edge(e).to;
        back_vertex.extend(std::iter::repeat_n(to, ids.len() - 1));
        back_edge.extend(std::iter::repeat_n(EdgePath::trivial(to), ids.len() - 1));
    }
    let backward = GraphMap {
        vertex_homs: ng
            .vertex_ids()
            .map(|v| {
                if v.0 < old_v {
                    GroupIso::identity(ng.group(v))
                } else {
                    GroupIso::from_trivial(&triv, g.group(back_vertex[v.0]))
                }
            })
            .collect(),
        vertex_map: back_vertex,
        edge_images: back_edge,
    };
    let mut images: Vec<EdgePath> = g
        .edge_ids()
        .map(|e| forward.apply_raw(g, &ng, f.map.forward_image(e)))
        .collect();
    for (&e, ks) in &plan {
        let p = f.map.forward_image(e);
        let bounds: Vec<usize> = std::iter::once(0).chain(ks.iter().copied()).chain([p.len()]).collect();
        for (i, &id) in pieces[&e].iter().enumerate() {
            let piece = p.slice_with(g, bounds[i], bounds[i + 1], i == 0, true);
            let img = forward.apply_raw(g, &ng, &piece);
            if id.0 < images.len() {
                images[id.0] = img;
            } else {
                images.push(img);
            }
        }
    }
    let mut vertex_map = f.map.vertex_map.clone();
    vertex_map.extend(new_vertex_image.iter().copied());
    let mut vertex_homs = f.map.vertex_homs.clone();
    vertex_homs.extend(new_vertex_image.iter().map(|&w| GroupIso::from_trivial(&triv, ng.group(w))));
    let map = GraphMap { vertex_map, vertex_homs, edge_images: images };
    let kind = MoveKind::Subdivide {
        cuts: plan.iter().map(|(e, ks)| (g.edge(*e).name.clone(), ks.clone())).collect(),
    };
    Ok(MoveReceipt::new(kind, f, ng, map, forward, backward))
}
