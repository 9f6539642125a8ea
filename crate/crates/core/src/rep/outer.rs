use std::collections::BTreeSet;

use super::{Marking, RepError, TopRep};
use crate::gog::{simultaneous_conjugator, EdgePath, Graph, OEdge, PathBuilder, VertexId};

/// Tree paths from vertex 0 and a generating set of loops for π₁ at vertex 0:
/// one loop per non-tree edge and one per vertex-group generator.
pub fn basis_loops(g: &Graph) -> (Vec<EdgePath>, Vec<EdgePath>) {
    let root = VertexId(0);
    // BFS tree
    let mut parent: Vec<Option<OEdge>> = vec![None; g.num_vertices()];
    let mut seen = vec![false; g.num_vertices()];
    seen[0] = true;
    let mut order = vec![root];
    let mut i = 0;
    let mut tree = BTreeSet::new();
    while i < order.len() {
        let v = order[i];
        i += 1;
        for o in g.oedges() {
            if g.origin(o) == v && !seen[g.term(o).0] {
                seen[g.term(o).0] = true;
                parent[g.term(o).0] = Some(o);
                tree.insert(o.edge());
                order.push(g.term(o));
            }
        }
    }
    let tree_path = |v: VertexId| {
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some(o) = parent[cur.0] {
            edges.push(o);
            cur = g.origin(o);
        }
        edges.reverse();
        EdgePath::from_edges(g, root, &edges)
    };
    let paths: Vec<EdgePath> = g.vertex_ids().map(tree_path).collect();
    let mut loops = Vec::new();
    for e in g.edge_ids() {
        if tree.contains(&e) {
            continue;
        }
        let o = OEdge::fwd(e);
        let mut b = PathBuilder::tight(g, root);
        b.push_path(&paths[g.origin(o).0]);
        b.push_edge(o);
        b.push_path(&paths[g.term(o).0].reverse(g));
        loops.push(b.finish());
    }
    for v in g.vertex_ids() {
        for &x in g.group(v).generators() {
            let mut b = PathBuilder::tight(g, root);
            b.push_path(&paths[v.0]);
            b.push_elem(x);
            b.push_path(&paths[v.0].reverse(g));
            loops.push(b.finish());
        }
    }
    (paths, loops)
}

/// Images of the base basis loops under `rho ∘ f ∘ sigma`, rebased at vertex 0 of the base.
pub fn outer_images(f: &TopRep) -> Result<Vec<EdgePath>, RepError> {
    let m: &Marking = f.marking.as_ref().ok_or(RepError::MarkingMissing)?;
    let base = &m.base;
    let (paths, loops) = basis_loops(base);
    let mut out = Vec::with_capacity(loops.len());
    for l in &loops {
        let s = m.sigma.apply(base, &f.graph, l);
        let fs = f.apply(&s);
        let r = m.rho.apply(&f.graph, base, &fs);
        let b = r.start();
        let mut builder = PathBuilder::tight(base, VertexId(0));
        builder.push_path(&paths[b.0]);
        builder.push_path(&r);
        builder.push_path(&paths[b.0].reverse(base));
        out.push(builder.finish());
    }
    Ok(out)
}

fn same_base(a: &Graph, b: &Graph) -> bool {
    a.num_vertices() == b.num_vertices()
        && a.num_edges() == b.num_edges()
        && a.vertices.iter().zip(&b.vertices).all(|(x, y)| x.name == y.name && x.group == y.group)
        && a.edges.iter().zip(&b.edges).all(|(x, y)| x == y)
}

/// Whether two marked representatives induce the same outer automorphism of the base.
pub fn verify_outer_class(a: &TopRep, b: &TopRep) -> Result<bool, RepError> {
    let (ma, mb) = match (&a.marking, &b.marking) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(RepError::MarkingMissing),
    };
    if !same_base(&ma.base, &mb.base) {
        return Ok(false);
    }
    let xs = outer_images(a)?;
    let ys = outer_images(b)?;
    Ok(simultaneous_conjugator(&ma.base, &xs, &ys).is_some())
}
