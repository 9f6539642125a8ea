use std::collections::{BTreeMap, BTreeSet};

use super::quotient::quotient;
use super::{cleanup, fold_turn, trivial_group, MoveError, MoveKind, MoveReceipt};
use crate::gog::{Edge, EdgeId, EdgePath, OEdge, PathBuilder, Vertex, VertexId};
use crate::groups::GroupIso;
use crate::rep::{turns_taken, GraphMap, TopRep};
use crate::rtt::{maximal_filtration, StratumKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

/// The leftmost (or rightmost) point of the core of an edge.
type State = (EdgeId, Side);

/// Where a core endpoint sits relative to the image of its edge.
#[derive(Debug, Clone, Copy)]
enum Pos {
    /// The vertex between image edges `k-1` and `k`.
    Cut(usize),
    /// Inside image edge `seg`, at the core endpoint `point` of that edge.
    Interior { seg: usize, point: State },
}

struct Cores {
    /// Image index of the first (left) or last (right) stratum edge, and the state it leads to.
    step: BTreeMap<State, (usize, State)>,
    at_end: BTreeSet<State>,
}

impl Cores {
    fn new(f: &TopRep, h: &BTreeSet<EdgeId>) -> Cores {
        let mut step = BTreeMap::new();
        for &e in h {
            let img = f.map.forward_image(e);
            let es = img.edges();
            let i = es.iter().position(|o| h.contains(&o.edge())).expect("EG stratum edges cross the stratum");
            let j = es.iter().rposition(|o| h.contains(&o.edge())).expect("EG stratum edges cross the stratum");
            let side = |o: OEdge, s: Side| match (o.is_reversed(), s) {
                (false, s) => s,
                (true, Side::Left) => Side::Right,
                (true, Side::Right) => Side::Left,
            };
            step.insert((e, Side::Left), (i, (es[i].edge(), side(es[i], Side::Left))));
            step.insert((e, Side::Right), (j, (es[j].edge(), side(es[j], Side::Right))));
        }
        // Greatest fixed point: an endpoint of the core is an endpoint of the edge
        // when the first (last) image edge is in the stratum and it recursively is too.
        let at_edge_end = |s: &State, i: usize| match s.1 {
            Side::Left => i == 0,
            Side::Right => i + 1 == f.map.forward_image(s.0).len(),
        };
        let mut at_end: BTreeSet<State> =
            step.iter().filter(|(s, (i, _))| at_edge_end(s, *i)).map(|(s, _)| *s).collect();
        loop {
            let drop: Vec<State> = at_end.iter().filter(|s| !at_end.contains(&step[s].1)).copied().collect();
            if drop.is_empty() {
                break;
            }
            for s in drop {
                at_end.remove(&s);
            }
        }
        Cores { step, at_end }
    }

    fn pos(&self, s: State) -> Pos {
        let (i, next) = self.step[&s];
        if self.at_end.contains(&next) {
            Pos::Cut(match s.1 {
                Side::Left => i,
                Side::Right => i + 1,
            })
        } else {
            Pos::Interior { seg: i, point: next }
        }
    }

    fn points(&self) -> BTreeMap<EdgeId, Vec<State>> {
        let mut out: BTreeMap<EdgeId, Vec<State>> = BTreeMap::new();
        for s in self.step.keys() {
            if !self.at_end.contains(s) {
                out.entry(s.0).or_default().push(*s);
            }
        }
        out
    }
}

/// Subdivide the edges of the EG stratum `r` (0-based, in the maximal filtration)
/// at the endpoints of their invariant cores, so that every direction of the new
/// stratum maps into it. Returns `None` when that already holds.
///
/// Core endpoints are found symbolically: the left endpoint of the core of `e`
/// lies in the first stratum edge of `f(e)`, at the left endpoint of that edge's
/// core, and so on. The resulting addresses are eventually periodic, so the new
/// vertices form a finite invariant set.
pub fn invariant_core_subdivision(f: &TopRep, r: usize) -> Result<Option<MoveReceipt>, MoveError> {
    let filt = maximal_filtration(f);
    let stratum = filt.strata.get(r).ok_or(MoveError::NotEG(r))?;
    if stratum.kind != StratumKind::Eg {
        return Err(MoveError::NotEG(r));
    }
    let h: BTreeSet<EdgeId> = stratum.edges.iter().copied().collect();
    let cores = Cores::new(f, &h);
    let points = cores.points();
    if points.is_empty() {
        return Ok(None);
    }
    Ok(Some(subdivide_at_points(f, &cores, &points)))
}

fn subdivide_at_points(f: &TopRep, cores: &Cores, points: &BTreeMap<EdgeId, Vec<State>>) -> MoveReceipt {
    let g = &f.graph;
    let triv = trivial_group(g);
    let mut ng = g.clone();
    let mut vertex_of: BTreeMap<State, VertexId> = BTreeMap::new();
    let mut pieces: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    for (&e, ps) in points {
        let base = g.edge(e).name.clone();
        let to = g.edge(e).to;
        let first = ng.fresh_edge_name(&base);
        ng.edges[e.0].name = first;
        let ms: Vec<VertexId> = ps
            .iter()
            .map(|&p| {
                let name = ng.fresh_vertex_name("v");
                ng.vertices.push(Vertex { name, group: triv.clone() });
                let v = VertexId(ng.vertices.len() - 1);
                vertex_of.insert(p, v);
                v
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
    let pieces_of = |e: EdgeId| pieces.get(&e).cloned().unwrap_or_else(|| vec![e]);
    // boundary index of a point within its edge: 1..=m
    let index_of = |p: State| points[&p.0].iter().position(|&q| q == p).expect("point listed") + 1;
    // Traverse `o` between boundary indices `s` and `t` given in the coordinates of `o.edge()`.
    let push_partial = |b: &mut PathBuilder<'_>, e: EdgeId, s: usize, t: usize| {
        let ids = pieces_of(e);
        if s < t {
            ids[s..t].iter().for_each(|&id| b.push_edge(OEdge::fwd(id)));
        } else {
            ids[t..s].iter().rev().for_each(|&id| b.push_edge(OEdge::fwd(id).rev()));
        }
    };
    let full = |e: EdgeId| pieces_of(e).len();
    let vertex_image = |e: EdgeId, pos: Pos| match pos {
        Pos::Cut(k) => f.map.forward_image(e).slot_vertex(g, k),
        Pos::Interior { point, .. } => vertex_of[&point],
    };

    let old_v = g.num_vertices();
    let forward = GraphMap {
        vertex_map: g.vertex_ids().collect(),
        vertex_homs: g.vertices.iter().map(|v| GroupIso::identity(&v.group)).collect(),
        edge_images: g
            .edge_ids()
            .map(|e| {
                let os: Vec<OEdge> = pieces_of(e).into_iter().map(OEdge::fwd).collect();
                EdgePath::from_edges(&ng, g.edge(e).from, &os)
            })
            .collect(),
    };
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

    // Image of the part of `e` between two positions of its image.
    #[derive(Clone, Copy)]
    enum End {
        Start,
        Finish,
        At(Pos),
    }
    let piece_image = |e: EdgeId, a: End, z: End| -> EdgePath {
        let p = f.map.forward_image(e);
        let n = p.len();
        let es = p.edges();
        let xs = p.elems();
        let start_v = match a {
            End::Start => p.start(),
            End::At(pos) => vertex_image(e, pos),
            End::Finish => unreachable!(),
        };
        let mut b = PathBuilder::raw(&ng, start_v);
        let span = |o: OEdge| (o.edge(), if o.is_reversed() { full(o.edge()) } else { 0 }, if o.is_reversed() { 0 } else { full(o.edge()) });
        // first full segment index and whether its leading slot element is included
        let (mut seg, include_lead) = match a {
            End::Start => (0, true),
            End::At(Pos::Cut(k)) => (k, false),
            End::At(Pos::Interior { seg, point }) => {
                let (oe, _, to) = span(es[seg]);
                let s = index_of(point);
                if let End::At(Pos::Interior { seg: zs, point: zp }) = z {
                    if zs == seg {
                        push_partial(&mut b, oe, s, index_of(zp));
                        return b.finish();
                    }
                }
                push_partial(&mut b, oe, s, to);
                (seg + 1, true)
            }
            End::Finish => unreachable!(),
        };
        let (stop, end_point) = match z {
            End::Finish => (n, None),
            End::At(Pos::Cut(k)) => (k, None),
            End::At(Pos::Interior { seg, point }) => (seg, Some(point)),
            End::Start => unreachable!(),
        };
        if include_lead {
            b.push_elem(xs[seg]);
        }
        while seg < stop {
            let (oe, from, to) = span(es[seg]);
            push_partial(&mut b, oe, from, to);
            b.push_elem(xs[seg + 1]);
            seg += 1;
        }
        if let Some(q) = end_point {
            let (oe, from, _) = span(es[stop]);
            push_partial(&mut b, oe, from, index_of(q));
        }
        b.finish()
    };

    let mut images: Vec<EdgePath> = Vec::with_capacity(ng.num_edges());
    images.resize(ng.num_edges(), EdgePath::trivial(VertexId(0)));
    for e in g.edge_ids() {
        let ps = points.get(&e).cloned().unwrap_or_default();
        let ends: Vec<End> = std::iter::once(End::Start)
            .chain(ps.iter().map(|&s| End::At(cores.pos(s))))
            .chain([End::Finish])
            .collect();
        for (i, &id) in pieces_of(e).iter().enumerate() {
            images[id.0] = piece_image(e, ends[i], ends[i + 1]);
        }
    }
    let mut vertex_map = f.map.vertex_map.clone();
    let mut vertex_homs = f.map.vertex_homs.clone();
    for v in old_v..ng.num_vertices() {
        let (&s, _) = vertex_of.iter().find(|(_, &w)| w.0 == v).expect("new vertex");
        let w = vertex_image(s.0, cores.pos(s));
        vertex_map.push(w);
        vertex_homs.push(GroupIso::from_trivial(&triv, ng.group(w)));
    }
    let map = GraphMap { vertex_map, vertex_homs, edge_images: images };
    let kind = MoveKind::CoreSubdivide {
        points: points
            .iter()
            .map(|(e, ps)| {
                let sides: Vec<&str> = ps.iter().map(|s| if s.1 == Side::Left { "L" } else { "R" }).collect();
                format!("{}:{}", g.edge(*e).name, sides.join(""))
            })
            .collect(),
    };
    MoveReceipt::new(kind, f, ng, map, forward, backward)
}

/// Remove a connecting path `alpha` whose image tightens to a point: fold at the
/// junctions of `alpha` where the images cancel, carry `alpha` forward, and
/// repeat; edges mapped to points are collapsed along the way. When folding
/// stops shortening `alpha`, [`pinch`] finishes the job.
pub fn collapse_connecting_path(f: &TopRep, alpha: &EdgePath) -> Result<Vec<MoveReceipt>, MoveError> {
    if !f.apply(alpha).is_empty() || alpha.is_empty() {
        return Err(MoveError::ImageNotTrivial);
    }
    let mut steps: Vec<MoveReceipt> = Vec::new();
    let mut cur = f.clone();
    let mut a = alpha.clone();
    // Folds along a Nielsen path can chop its edges forever without shortening
    // α; after a stall, pinch α instead.
    let mut shortest = a.len();
    let mut stall = 0;
    loop {
        let rs = cleanup(&cur)?;
        for r in rs {
            a = r.forward.apply(&cur.graph, &r.rep.graph, &a);
            cur = r.rep.clone();
            steps.push(r);
        }
        if a.is_empty() {
            return Ok(steps);
        }
        if a.len() < shortest {
            shortest = a.len();
            stall = 0;
        }
        stall += 1;
        // Folding at a cancelling junction can subdivide edges that recur in α;
        // take the fold that leaves α shortest.
        let mut best: Option<(usize, EdgePath, Vec<MoveReceipt>)> = None;
        if stall <= STALL_LIMIT {
            let junctions = turns_taken(&cur.graph, &a)
                .into_iter()
                .map(|(_, t)| t)
                .filter(|t| !t.is_degenerate() && cur.turn_image(t).is_some_and(|i| i.is_degenerate()));
            for t in junctions {
                let Ok(rs) = fold_turn(&cur, &t) else { continue };
                let mut g = &cur.graph;
                let mut pushed = a.clone();
                for r in &rs {
                    pushed = r.forward.apply(g, &r.rep.graph, &pushed);
                    g = &r.rep.graph;
                }
                if best.as_ref().is_none_or(|(n, _, _)| pushed.len() < *n) {
                    best = Some((pushed.len(), pushed, rs));
                }
            }
        }
        match best {
            Some((_, pushed, rs)) => {
                a = pushed;
                cur = rs.last().expect("a fold").rep.clone();
                steps.extend(rs);
            }
            None => {
                let r = pinch(&cur, &a)?;
                a = r.forward.apply(&cur.graph, &r.rep.graph, &a);
                cur = r.rep.clone();
                steps.push(r);
                let rs = cleanup(&cur)?;
                steps.extend(rs);
                if !a.is_empty() {
                    return Err(MoveError::ImageNotTrivial);
                }
                return Ok(steps);
            }
        }
    }
}

const STALL_LIMIT: usize = 8;

/// Identify the endpoints of a tight path `alpha` with trivial image and delete an
/// edge it crosses exactly once. The deleted edge goes to the rest of the loop
/// that `alpha` closes up, so `alpha` itself maps to a trivial path.
pub fn pinch(f: &TopRep, alpha: &EdgePath) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    if alpha.is_empty() || !f.apply(alpha).is_empty() {
        return Err(MoveError::ImageNotTrivial);
    }
    let (p, q) = (alpha.start(), alpha.end(g));
    if p == q {
        return Err(MoveError::Unsupported("pinch of a closed path".into()));
    }
    let (s, t) = match (g.is_trivial(p), g.is_trivial(q)) {
        (_, true) => (p, q),
        (true, false) => (q, p),
        (false, false) => {
            return Err(MoveError::Unsupported("pinch would merge two nontrivial vertex groups".into()))
        }
    };
    let edges = alpha.edges();
    let k = (0..edges.len())
        .find(|&i| edges.iter().filter(|o| o.edge() == edges[i].edge()).count() == 1)
        .ok_or_else(|| MoveError::Unsupported("every edge of the path recurs".into()))?;
    let o = edges[k];
    let mut rep_of: Vec<VertexId> = g.vertex_ids().collect();
    rep_of[t.0] = s;
    let qt = quotient(g, &rep_of, &BTreeSet::from([o.edge()]));
    let ng = &qt.graph;
    let carry = |path: &EdgePath, b: &mut PathBuilder| {
        b.push_elem(path.elems()[0]);
        for (i, &x) in path.edges().iter().enumerate() {
            let ne = qt.edge_to[x.edge().0].expect("only the pinched edge is deleted");
            b.push_edge(OEdge::new(ne, x.is_reversed()));
            b.push_elem(path.elems()[i + 1]);
        }
    };
    let (a1, a2) = (alpha.slice(g, 0, k), alpha.slice(g, k + 1, edges.len()));
    let (r1, r2) = (a1.reverse(g), a2.reverse(g));
    let mut b = PathBuilder::tight(ng, qt.vertex_to[g.origin(o).0]);
    carry(&r1, &mut b);
    carry(&r2, &mut b);
    let image = b.finish();
    let image = if o.is_reversed() { image.reverse(ng) } else { image };
    let forward = qt.forward(g, |_| image.clone());
    let backward = qt.backward(g, |v| {
        if v != t {
            EdgePath::trivial(v)
        } else if s == p {
            alpha.clone()
        } else {
            alpha.reverse(g)
        }
    });
    let map = backward.then(ng, g, &f.map, g).then(ng, g, &forward, ng);
    let kind = MoveKind::Pinch { edge: g.edge(o.edge()).name.clone() };
    Ok(MoveReceipt::new(kind, f, ng.clone(), map, forward, backward))
}

/// Points of the subdivision as `(edge, side)` pairs, for tests.
#[doc(hidden)]
pub fn core_points(f: &TopRep, r: usize) -> Vec<(String, char, Option<usize>)> {
    let filt = maximal_filtration(f);
    let h: BTreeSet<EdgeId> = filt.strata[r].edges.iter().copied().collect();
    let cores = Cores::new(f, &h);
    cores
        .points()
        .values()
        .flatten()
        .map(|&s| {
            let cut = match cores.pos(s) {
                Pos::Cut(k) => Some(k),
                Pos::Interior { .. } => None,
            };
            (f.graph.edge(s.0).name.clone(), if s.1 == Side::Left { 'L' } else { 'R' }, cut)
        })
        .collect()
}
