use std::collections::BTreeSet;

use super::quotient::quotient;
use super::{MoveError, MoveKind, MoveReceipt};
use crate::gog::{EdgeId, EdgePath, Subgraph, VertexId};
use crate::rep::TopRep;

/// Contract each component of the forest `s` to its root. Roots are the unique
/// nontrivial vertex of a component, else `prefer` when it lies in the component,
/// else the smallest vertex. The new map is `π ∘ f ∘ ρ`, tightened on request.
fn contract(
    f: &TopRep,
    s: &BTreeSet<EdgeId>,
    prefer: Option<VertexId>,
    tighten: bool,
    kind: MoveKind,
) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let names = || Subgraph { edges: s.clone() }.names(g);
    if !g.is_collapsible_forest(&Subgraph { edges: s.clone() }) {
        return Err(MoveError::NotCollapsible(names()));
    }
    let comps = g.components_with_vertices(s, false);
    let mut rep_of: Vec<VertexId> = g.vertex_ids().collect();
    let mut comp_of: Vec<Option<usize>> = vec![None; g.num_vertices()];
    for (i, (vs, _)) in comps.iter().enumerate() {
        let root = vs
            .iter()
            .copied()
            .find(|&v| !g.is_trivial(v))
            .or(prefer.filter(|p| vs.contains(p)))
            .unwrap_or_else(|| *vs.iter().next().unwrap());
        for &v in vs {
            rep_of[v.0] = root;
            comp_of[v.0] = Some(i);
        }
    }
    let q = quotient(g, &rep_of, s);
    let forward = q.forward(g, |e| EdgePath::trivial(q.vertex_to[g.edge(e).from.0]));
    let backward = q.backward(g, |v| match comp_of[v.0] {
        Some(i) => {
            let edges = g.path_within(&comps[i].1, rep_of[v.0], v).expect("components are connected");
            EdgePath::from_edges(g, rep_of[v.0], &edges)
        }
        None => EdgePath::trivial(v),
    });
    let fr = backward.then_raw(&q.graph, g, &f.map, g);
    let map = if tighten {
        fr.then(&q.graph, g, &forward, &q.graph)
    } else {
        fr.then_raw(&q.graph, g, &forward, &q.graph)
    };
    Ok(MoveReceipt::new(kind, f, q.graph.clone(), map, forward, backward))
}

fn edge_invariant(f: &TopRep, s: &Subgraph) -> bool {
    s.edges.iter().all(|&e| f.map.forward_image(e).edges().iter().all(|o| s.contains(o.edge())))
}

/// Collapse an invariant forest. Images lose exactly the collapsed edges and are
/// not retightened, so the transition matrix loses exactly those rows and columns.
pub fn collapse(f: &TopRep, s: &Subgraph) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    if !edge_invariant(f, s) {
        return Err(MoveError::NotInvariant(s.names(g)));
    }
    contract(f, &s.edges, None, false, MoveKind::Collapse { edges: s.names(g) })
}

/// Edges eventually mapped to a point.
pub fn pretrivial_forest(f: &TopRep) -> Subgraph {
    let mut s = BTreeSet::new();
    loop {
        let before = s.len();
        for e in f.graph.edge_ids() {
            if !s.contains(&e) && f.map.forward_image(e).edges().iter().all(|o| s.contains(&o.edge())) {
                s.insert(e);
            }
        }
        if s.len() == before {
            return Subgraph { edges: s };
        }
    }
}

/// Greedy union of edge-orbit closures, in edge order, kept while the union is an
/// invariant collapsible forest.
pub fn invariant_forest(f: &TopRep) -> Subgraph {
    let mut s = Subgraph::default();
    for e in f.graph.edge_ids() {
        if s.contains(e) {
            continue;
        }
        let mut c = f.orbit_closure(&BTreeSet::from([e]));
        c.extend(s.edges.iter().copied());
        let cand = Subgraph { edges: c };
        if f.graph.is_collapsible_forest(&cand) && f.is_invariant(&cand) {
            s = cand;
        }
    }
    s
}

/// Remove an inessential valence-one vertex and its edge.
pub fn valence_one(f: &TopRep, v: VertexId) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let name = g.vertices[v.0].name.clone();
    if !g.is_trivial(v) || g.valence(v) != 1 {
        return Err(MoveError::NotInessentialValenceOne(name));
    }
    let e = g.edge_ids().find(|&e| g.edge(e).from == v || g.edge(e).to == v).expect("valence one");
    let ed = g.edge(e);
    let other = if ed.from == v { ed.to } else { ed.from };
    let kind = MoveKind::ValenceOne { vertex: name, edge: ed.name.clone() };
    contract(f, &BTreeSet::from([e]), Some(other), true, kind)
}

/// Remove an inessential valence-two vertex `v` by collapsing the incident edge
/// `collapse_edge` and expanding the other across it.
pub fn valence_two(f: &TopRep, v: VertexId, collapse_edge: EdgeId) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let name = g.vertices[v.0].name.clone();
    let incident: Vec<EdgeId> = g.edge_ids().filter(|&e| g.edge(e).from == v || g.edge(e).to == v).collect();
    let ok = g.is_trivial(v)
        && g.valence(v) == 2
        && incident.len() == 2
        && incident.contains(&collapse_edge);
    if !ok {
        return Err(MoveError::NotInessentialValenceTwo(name));
    }
    let expanded = *incident.iter().find(|&&e| e != collapse_edge).unwrap();
    let ed = g.edge(collapse_edge);
    let other = if ed.from == v { ed.to } else { ed.from };
    let kind = MoveKind::ValenceTwo {
        vertex: name,
        collapsed: ed.name.clone(),
        expanded: g.edge(expanded).name.clone(),
    };
    contract(f, &BTreeSet::from([collapse_edge]), Some(other), true, kind)
}
