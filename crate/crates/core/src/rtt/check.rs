use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::filtration::{filtration_of_matrix, Filtration, StratumKind};
use crate::gog::{EdgeId, EdgePath, Graph, OEdge, PathBuilder, VertexId};
use crate::groups::Elem;
use crate::rep::{turns_at, turns_taken, Direction, TopRep, Turn};

/// A concrete reason a check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A stratum direction whose image leaves the stratum.
    Direction { direction: Direction, image: Option<Direction> },
    /// An illegal turn between a stratum edge and a lower edge.
    MixedTurn(Turn),
    /// A path in the lower filtration element, with endpoints on the stratum, mapped to a point.
    ConnectingPath(EdgePath),
    /// An illegal turn inside the stratum, taken by the image of `edge` at `position`.
    IllegalTurn { edge: EdgeId, position: usize, turn: Turn },
    /// The filtration is not an invariant maximal filtration.
    Filtration { stratum: usize, reason: String },
    /// An image that is not tight or has no edges.
    Image { edge: EdgeId, reason: String },
}

impl Witness {
    pub fn describe(&self, g: &Graph) -> String {
        match self {
            Witness::Direction { direction, image } => format!(
                "direction {} maps to {}",
                direction.display(g),
                image.map_or("a vertex".to_string(), |d| d.display(g))
            ),
            Witness::MixedTurn(t) => format!("mixed turn {} is illegal", t.display(g)),
            Witness::ConnectingPath(p) => format!("connecting path {} maps to a point", p.display(g)),
            Witness::IllegalTurn { edge, position, turn } => format!(
                "image of {} takes the illegal turn {} at position {position}",
                g.edge(*edge).name,
                turn.display(g)
            ),
            Witness::Filtration { stratum, reason } => format!("stratum H{}: {reason}", stratum + 1),
            Witness::Image { edge, reason } => format!("image of {}: {reason}", g.edge(*edge).name),
        }
    }
}

pub type Clause = Result<(), Witness>;

#[derive(Debug, Clone)]
pub struct StratumVerdict {
    /// 0-based stratum index.
    pub index: usize,
    pub eg_i: Clause,
    pub eg_ii: Clause,
    pub eg_iii: Clause,
}

impl StratumVerdict {
    pub fn passes(&self) -> bool {
        self.eg_i.is_ok() && self.eg_ii.is_ok() && self.eg_iii.is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct RttReport {
    /// Failures of the preconditions: tight images and a maximal invariant filtration.
    pub structure: Vec<Witness>,
    /// One verdict per EG stratum, bottom-up.
    pub strata: Vec<StratumVerdict>,
}

impl RttReport {
    pub fn passes(&self) -> bool {
        self.structure.is_empty() && self.strata.iter().all(StratumVerdict::passes)
    }

    pub fn witnesses(&self) -> Vec<&Witness> {
        let clauses = self.strata.iter().flat_map(|s| [&s.eg_i, &s.eg_ii, &s.eg_iii]);
        self.structure.iter().chain(clauses.filter_map(|c| c.as_ref().err())).collect()
    }

    pub fn describe(&self, g: &Graph) -> String {
        let mut out = String::new();
        for w in &self.structure {
            let _ = writeln!(out, "structure: fail: {}", w.describe(g));
        }
        let show = |c: &Clause| match c {
            Ok(()) => "pass".to_string(),
            Err(w) => format!("fail: {}", w.describe(g)),
        };
        for s in &self.strata {
            let _ = writeln!(out, "H{} EG-i: {}", s.index + 1, show(&s.eg_i));
            let _ = writeln!(out, "H{} EG-ii: {}", s.index + 1, show(&s.eg_ii));
            let _ = writeln!(out, "H{} EG-iii: {}", s.index + 1, show(&s.eg_iii));
        }
        out
    }
}

/// Check that `filt` is a maximal invariant filtration for `f` and that each EG
/// stratum satisfies EG-i, EG-ii and EG-iii.
pub fn check_rtt(f: &TopRep, filt: &Filtration) -> RttReport {
    let g = &f.graph;
    let mut structure = Vec::new();
    for e in g.edge_ids() {
        let p = f.map.forward_image(e);
        if p.is_empty() {
            structure.push(Witness::Image { edge: e, reason: "no edges".into() });
        } else if !p.is_tight(g) {
            structure.push(Witness::Image { edge: e, reason: "not tight".into() });
        }
    }
    structure.extend(check_filtration(f, filt));
    if !structure.is_empty() {
        return RttReport { structure, strata: Vec::new() };
    }
    let strata = filt
        .eg_indices()
        .into_iter()
        .map(|r| {
            let h: BTreeSet<EdgeId> = filt.strata[r].edges.iter().copied().collect();
            let below = filt.g(r);
            StratumVerdict {
                index: r,
                eg_i: check_eg_i(f, &h, &below),
                eg_ii: check_eg_ii(f, &h, &below),
                eg_iii: check_eg_iii(f, &h),
            }
        })
        .collect();
    RttReport { structure, strata }
}

fn check_filtration(f: &TopRep, filt: &Filtration) -> Vec<Witness> {
    let g = &f.graph;
    let m = f.transition_matrix();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (r, s) in filt.strata.iter().enumerate() {
        for &e in &s.edges {
            if !seen.insert(e) {
                out.push(Witness::Filtration { stratum: r, reason: format!("edge {} repeated", g.edge(e).name) });
            }
        }
        let gr = filt.g(r + 1);
        if let Some(&e) = s.edges.iter().find(|&&e| f.map.forward_image(e).edges().iter().any(|o| !gr.contains(&o.edge()))) {
            out.push(Witness::Filtration {
                stratum: r,
                reason: format!("G{} is not invariant: image of {} leaves it", r + 1, g.edge(e).name),
            });
        }
        let block = m.block(&s.edges);
        let zero = s.edges.len() == 1 && block[0][0] == 0;
        let sub = filtration_of_matrix(&crate::rep::TransitionMatrix { rows: block });
        if !zero && sub.len() != 1 {
            out.push(Witness::Filtration { stratum: r, reason: "block is neither irreducible nor zero".into() });
        } else if let Some(t) = sub.strata.first() {
            if t.kind != s.kind {
                out.push(Witness::Filtration { stratum: r, reason: format!("recorded as {} but is {}", s.kind, t.kind) });
            }
        }
    }
    if seen.len() != g.num_edges() {
        out.push(Witness::Filtration { stratum: filt.len(), reason: "strata do not cover every edge".into() });
    }
    out
}

/// Directions in `H_r` map into `H_r`, and mixed turns are legal.
fn check_eg_i(f: &TopRep, h: &BTreeSet<EdgeId>, below: &BTreeSet<EdgeId>) -> Clause {
    let g = &f.graph;
    for &e in h {
        for o in [OEdge::fwd(e), OEdge::fwd(e).rev()] {
            let d = Direction::new(o, Elem::ID);
            let image = f.derivative(d);
            if !image.is_some_and(|i| h.contains(&i.edge.edge())) {
                return Err(Witness::Direction { direction: d, image });
            }
        }
    }
    let mut legal = f.legality();
    let vertices = g.incident_vertices(h);
    for v in vertices {
        for t in turns_at(g, v) {
            let (x, y) = (t.a.edge.edge(), t.b.edge.edge());
            let mixed = (h.contains(&x) && below.contains(&y)) || (h.contains(&y) && below.contains(&x));
            if mixed && !legal.is_legal(&t) {
                return Err(Witness::MixedTurn(t));
            }
        }
    }
    Ok(())
}

/// No image of an `H_r` edge takes an illegal turn inside `H_r`.
fn check_eg_iii(f: &TopRep, h: &BTreeSet<EdgeId>) -> Clause {
    let mut legal = f.legality();
    for &e in h {
        for (position, turn) in turns_taken(&f.graph, f.map.forward_image(e)) {
            if turn.within(|o| h.contains(&o.edge())) && !legal.is_legal(&turn) {
                return Err(Witness::IllegalTurn { edge: e, position, turn });
            }
        }
    }
    Ok(())
}

/// Paths enumerated per component before giving up on an exhaustive search.
const PATH_CAP: usize = 200_000;

/// No nontrivial path in `G_{r-1}` with endpoints in `H_r ∩ G_{r-1}` maps to a point.
///
/// Components whose endpoint vertices are all periodic pass outright. Otherwise
/// tight paths of length at most `2·|E(C)| + 1` are enumerated; in a contractible
/// component these are all the tight paths.
fn check_eg_ii(f: &TopRep, h: &BTreeSet<EdgeId>, below: &BTreeSet<EdgeId>) -> Clause {
    let g = &f.graph;
    let touch = g.incident_vertices(h);
    for (vs, es) in g.components_with_vertices(below, false) {
        let ends: BTreeSet<VertexId> = vs.intersection(&touch).copied().collect();
        if ends.is_empty() {
            continue;
        }
        let contractible = es.len() + 1 == vs.len() && vs.iter().all(|&v| g.is_trivial(v));
        if !contractible && ends.iter().all(|&v| is_periodic(f, v)) {
            continue;
        }
        if let Some(alpha) = search_connecting_path(f, &es, &ends, 2 * es.len() + 1) {
            return Err(Witness::ConnectingPath(alpha));
        }
    }
    Ok(())
}

pub fn is_periodic(f: &TopRep, v: VertexId) -> bool {
    let mut w = v;
    for _ in 0..f.graph.num_vertices() {
        w = f.map.vertex_map[w.0];
        if w == v {
            return true;
        }
    }
    false
}

/// Depth-first search over tight paths inside `edges`, from and to `ends`, for one
/// whose image tightens to a point.
fn search_connecting_path(f: &TopRep, edges: &BTreeSet<EdgeId>, ends: &BTreeSet<VertexId>, max_len: usize) -> Option<EdgePath> {
    let mut budget = PATH_CAP;
    // (oriented edges, elements at interior slots)
    fn dfs(
        f: &TopRep,
        edges: &BTreeSet<EdgeId>,
        ends: &BTreeSet<VertexId>,
        max_len: usize,
        start: VertexId,
        path: &mut Vec<(Elem, OEdge)>,
        budget: &mut usize,
    ) -> Option<EdgePath> {
        let g = &f.graph;
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let here = path.last().map_or(start, |&(_, o)| g.term(o));
        if !path.is_empty() && ends.contains(&here) {
            let mut b = PathBuilder::raw(g, start);
            for &(x, o) in path.iter() {
                b.push_elem(x);
                b.push_edge(o);
            }
            let alpha = b.finish();
            if f.apply(&alpha).is_empty() {
                return Some(alpha);
            }
        }
        if path.len() == max_len {
            return None;
        }
        let elems: Vec<Elem> = if path.is_empty() { vec![Elem::ID] } else { g.group(here).elements().collect() };
        for &e in edges {
            for o in [OEdge::fwd(e), OEdge::fwd(e).rev()] {
                if g.origin(o) != here {
                    continue;
                }
                for &x in &elems {
                    if let Some(&(_, prev)) = path.last() {
                        if x.is_id() && prev.rev() == o {
                            continue;
                        }
                    }
                    path.push((x, o));
                    let found = dfs(f, edges, ends, max_len, start, path, budget);
                    path.pop();
                    if found.is_some() {
                        return found;
                    }
                }
            }
        }
        None
    }
    for &s in ends {
        let mut path = Vec::new();
        if let Some(a) = dfs(f, edges, ends, max_len, s, &mut path, &mut budget) {
            return Some(a);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedReport {
    pub bound: i64,
    pub eg_strata: usize,
    pub largest_block: usize,
    pub bounded: bool,
}

/// At most `2η + 3β − 3` EG strata, each with a block of at most that size.
pub fn bounded_check(f: &TopRep, filt: &Filtration) -> BoundedReport {
    let bound = f.graph.invariants().edge_bound;
    let eg: Vec<usize> = filt.strata.iter().filter(|s| s.kind == StratumKind::Eg).map(|s| s.edges.len()).collect();
    let largest_block = eg.iter().copied().max().unwrap_or(0);
    BoundedReport {
        bound,
        eg_strata: eg.len(),
        largest_block,
        bounded: eg.len() as i64 <= bound && largest_block as i64 <= bound,
    }
}
