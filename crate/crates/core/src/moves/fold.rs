use std::collections::{BTreeMap, BTreeSet};

use super::quotient::quotient;
use super::{reframe, subdivide, subdivide_many, MoveError, MoveKind, MoveReceipt};
use crate::gog::{EdgeId, EdgePath, OEdge, VertexId};
use crate::groups::Elem;
use crate::rep::{Direction, GraphMap, TopRep, Turn};

/// Identify two oriented edges with a common origin and equal images.
///
/// The merged edge keeps the name of the edge with the smaller id; the merged
/// far vertex keeps the nontrivial vertex group if there is one.
pub fn fold(f: &TopRep, p1: OEdge, p2: OEdge) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let (n1, n2) = (g.oedge_name(p1), g.oedge_name(p2));
    if p1.edge() == p2.edge() {
        return Err(MoveError::Unsupported(format!("fold of {n1} with its own edge")));
    }
    if g.origin(p1) != g.origin(p2) || f.image(p1) != f.image(p2) {
        return Err(MoveError::ImagesDisagree(n1, n2));
    }
    let (pk, pd) = if p1.edge() < p2.edge() { (p1, p2) } else { (p2, p1) };
    let (wk, wd) = (g.term(pk), g.term(pd));
    if wk == wd {
        return Err(MoveError::Unsupported(format!("fold of {n1} and {n2} would kill a loop")));
    }
    if !g.is_trivial(wk) && !g.is_trivial(wd) {
        return Err(MoveError::BothEndpointsNontrivial(n1, n2));
    }
    // s survives, t is merged into it; ps, pt are the folded edges ending there.
    let (s, t, ps, pt) = if g.is_trivial(wd) { (wk, wd, pk, pd) } else { (wd, wk, pd, pk) };
    let mut rep_of: Vec<VertexId> = g.vertex_ids().collect();
    rep_of[t.0] = s;
    let q = quotient(g, &rep_of, &BTreeSet::from([pd.edge()]));
    let kept = OEdge::new(q.edge_to[pk.edge().0].expect("kept edge survives"), pk.is_reversed());
    let forward = q.forward(g, |_| {
        let p = EdgePath::edge(&q.graph, kept);
        if pd.is_reversed() {
            p.reverse(&q.graph)
        } else {
            p
        }
    });
    let backward = q.backward(g, |v| {
        if v == t {
            EdgePath::from_edges(g, s, &[ps.rev(), pt])
        } else {
            EdgePath::trivial(v)
        }
    });
    let map = backward.then(&q.graph, g, &f.map, g).then(&q.graph, g, &forward, &q.graph);
    let kind = MoveKind::Fold { kept: g.oedge_name(pk), dropped: g.oedge_name(pd) };
    Ok(MoveReceipt::new(kind, f, q.graph.clone(), map, forward, backward))
}

/// Change of marking by `t(o) = o·y`: the new map is `t ∘ f ∘ t⁻¹`, tightened.
pub fn twist(f: &TopRep, o: OEdge, y: Elem) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let v = g.term(o);
    let grp = g.group(v);
    grp.check(y).map_err(|_| MoveError::BadElement(g.vertices[v.0].name.clone()))?;
    let twisted = |y: Elem| {
        let mut t = GraphMap::identity(g);
        let e = o.edge();
        t.edge_images[e.0] = if o.is_reversed() {
            EdgePath::edge(g, OEdge::fwd(e)).mul_left(g, grp.inv(y))
        } else {
            EdgePath::edge(g, o).mul_right(g, y)
        };
        t
    };
    let forward = twisted(y);
    let backward = twisted(grp.inv(y));
    let map = backward.then(g, g, &f.map, g).then(g, g, &forward, g);
    let kind = MoveKind::Twist { edge: g.oedge_name(o), elem: grp.display_elem(y) };
    Ok(MoveReceipt::new(kind, f, g.clone(), map, forward, backward))
}

/// Fold the two germs of a turn whose image under Df is degenerate: twist so both
/// directions carry the identity, subdivide to the maximal common initial segment
/// of their images, reframe the far ends to agree, then fold.
pub fn fold_turn(f: &TopRep, turn: &Turn) -> Result<Vec<MoveReceipt>, MoveError> {
    fold_turn_span(f, turn, FoldSpan::Maximal)
}

/// How much of the common initial segment a fold identifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldSpan {
    Maximal,
    /// One image edge only. At a single vertex a maximal fold can be a full fold
    /// of a loop, which lands back on the same graph; a partial fold creates a
    /// new trivial vertex instead.
    Shortest,
    /// Shortest, after subdividing the first common image edge when either image
    /// is a single edge, so that the fold is proper on both sides.
    Split,
}

pub fn fold_turn_span(f: &TopRep, turn: &Turn, span: FoldSpan) -> Result<Vec<MoveReceipt>, MoveError> {
    let mut steps: Vec<MoveReceipt> = Vec::new();
    let mut cur = f.clone();
    let mut turn = *turn;
    match cur.turn_image(&turn) {
        Some(img) if img.is_degenerate() && !turn.is_degenerate() => {}
        _ => return Err(MoveError::NotFoldable(turn.display(&cur.graph))),
    }
    let mut commit = |cur: &mut TopRep, turn: &mut Turn, r: MoveReceipt| {
        *turn = r.push_turn(&cur.graph, turn).expect("moves before the fold keep every edge");
        *cur = r.rep.clone();
        steps.push(r);
    };
    if !turn.b.elem.is_id() {
        let r = twist(&cur, turn.b.edge, turn.b.elem)?;
        commit(&mut cur, &mut turn, r);
    }
    debug_assert!(turn.a.elem.is_id() && turn.b.elem.is_id());
    if span == FoldSpan::Split {
        let first = cur.image(turn.a.edge.rev()).edges()[0];
        let short = [turn.a, turn.b].iter().any(|d| cur.image(d.edge.rev()).len() < 2);
        if short {
            let n = cur.map.forward_image(first.edge()).len();
            if n < 2 {
                return Err(MoveError::Unsupported(format!(
                    "cannot split {} for a partial fold",
                    cur.graph.oedge_name(first)
                )));
            }
            let r = subdivide(&cur, first.edge(), n / 2)?;
            commit(&mut cur, &mut turn, r);
        }
    }
    let (g1, g2) = (turn.a.edge.rev(), turn.b.edge.rev());
    let (i1, i2) = (cur.image(g1), cur.image(g2));
    let mut l = 0;
    while l < i1.len().min(i2.len())
        && i1.edges()[l] == i2.edges()[l]
        && i1.elems()[l] == i2.elems()[l]
    {
        l += 1;
    }
    debug_assert!(l >= 1);
    if span != FoldSpan::Maximal {
        l = 1;
    }
    let mut cuts: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (germ, img) in [(g1, &i1), (g2, &i2)] {
        if img.len() > l {
            let k = if germ.is_reversed() { img.len() - l } else { l };
            cuts.entry(germ.edge()).or_default().push(k);
        }
    }
    if g1.edge() == g2.edge() && 2 * l >= i1.len() {
        return Err(MoveError::Unsupported(format!(
            "self-fold of {} overlaps itself",
            cur.graph.oedge_name(g1)
        )));
    }
    if !cuts.is_empty() {
        let r = subdivide_many(&cur, &cuts)?;
        commit(&mut cur, &mut turn, r);
    }
    let (q1, q2) = (turn.a.edge.rev(), turn.b.edge.rev());
    let (t1, t2) = (cur.image(q1).trail(), cur.image(q2).trail());
    if t1 != t2 {
        let g = &cur.graph;
        if g.term(q1) == g.term(q2) {
            return Err(MoveError::Unsupported(format!(
                "fold of {} and {} would kill a loop",
                g.oedge_name(q1),
                g.oedge_name(q2)
            )));
        }
        let (m, z) = if g.is_trivial(g.term(q2)) {
            let grp = g.group(cur.map.vertex_map[g.term(q2).0]);
            (g.term(q2), grp.mul(grp.inv(t2), t1))
        } else if g.is_trivial(g.term(q1)) {
            let grp = g.group(cur.map.vertex_map[g.term(q1).0]);
            (g.term(q1), grp.mul(grp.inv(t1), t2))
        } else {
            return Err(MoveError::BothEndpointsNontrivial(g.oedge_name(q1), g.oedge_name(q2)));
        };
        let r = reframe(&cur, m, z)?;
        commit(&mut cur, &mut turn, r);
    }
    let r = fold(&cur, q1, q2)?;
    steps.push(r);
    Ok(steps)
}

/// One descent round at an illegal turn `T_0` with Df-orbit `T_0, …, T_k` (`T_k`
/// degenerate): fold at `T_{k-1}`, then at the images of `T_{k-2}, …, T_0`.
/// Stops early once a fold leaves an untight or edgeless image.
pub fn fold_round(f: &TopRep, t0: &Turn) -> Result<Vec<MoveReceipt>, MoveError> {
    fold_round_span(f, t0, FoldSpan::Maximal)
}

pub fn fold_round_span(f: &TopRep, t0: &Turn, span: FoldSpan) -> Result<Vec<MoveReceipt>, MoveError> {
    let orbit = f
        .legality()
        .illegal_orbit(t0)
        .ok_or_else(|| MoveError::NotFoldable(t0.display(&f.graph)))?;
    let mut pending: Vec<Turn> = orbit[..orbit.len() - 1].to_vec();
    let mut steps = Vec::new();
    let mut cur = f.clone();
    while let Some(t) = pending.pop() {
        match cur.turn_image(&t) {
            Some(img) if img.is_degenerate() && !t.is_degenerate() => {}
            _ => break,
        }
        for r in fold_turn_span(&cur, &t, span)? {
            let mapped: Option<Vec<Turn>> = pending.iter().map(|p| r.push_turn(&cur.graph, p)).collect();
            cur = r.rep.clone();
            steps.push(r);
            match mapped {
                Some(m) => pending = m,
                None => pending.clear(),
            }
        }
        if steps.last().is_some_and(|r| r.needs_cleanup()) {
            break;
        }
    }
    Ok(steps)
}

/// Descent at the illegal turn that `f(e)` takes at slot `position`: subdivide `e`
/// there, then fold along the orbit of the turn at the new valence-two vertex.
/// Starting from that vertex matters when a later subdivision lands on the same
/// point; the illegality then sits at a vertex rather than inside an image.
pub fn descent_round(f: &TopRep, e: EdgeId, position: usize, span: FoldSpan) -> Result<Vec<MoveReceipt>, MoveError> {
    let r = subdivide(f, e, position)?;
    let g = &r.rep.graph;
    let second = EdgeId(f.graph.num_edges());
    let tx = Turn::new(g, Direction::new(OEdge::fwd(e), Elem::ID), Direction::new(OEdge::new(second, true), Elem::ID));
    let cur = r.rep.clone();
    let mut steps = vec![r];
    steps.extend(fold_round_span(&cur, &tx, span)?);
    Ok(steps)
}
