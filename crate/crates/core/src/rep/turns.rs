use std::collections::HashMap;
use std::fmt;

use super::map::GraphMap;
use crate::gog::{EdgePath, Graph, OEdge, VertexId};
use crate::groups::Elem;

/// A direction at τ(edge): the edge translated by a vertex-group element.
/// Ordered by edge first, then element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub edge: OEdge,
    pub elem: Elem,
}

impl Direction {
    pub fn new(edge: OEdge, elem: Elem) -> Direction {
        Direction { edge, elem }
    }

    pub fn vertex(&self, g: &Graph) -> VertexId {
        g.term(self.edge)
    }

    pub fn display(&self, g: &Graph) -> String {
        let v = self.vertex(g);
        format!("({}, {})", g.group(v).display_elem(self.elem), g.oedge_name(self.edge))
    }
}

/// Unordered pair of directions at one vertex, normalized so that the smaller
/// entry carries the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn {
    pub a: Direction,
    pub b: Direction,
}

impl Turn {
    pub fn new(g: &Graph, d1: Direction, d2: Direction) -> Turn {
        let v = d1.vertex(g);
        debug_assert_eq!(v, d2.vertex(g), "turn directions at different vertices");
        let grp = g.group(v);
        let rel = |x: Direction, y: Direction| Direction::new(y.edge, grp.mul(grp.inv(x.elem), y.elem));
        let (a, b) = match d1.edge.cmp(&d2.edge) {
            std::cmp::Ordering::Less => (d1, rel(d1, d2)),
            std::cmp::Ordering::Greater => (d2, rel(d2, d1)),
            std::cmp::Ordering::Equal => {
                let x = rel(d1, d2);
                let y = rel(d2, d1);
                (d1, if x.elem <= y.elem { x } else { y })
            }
        };
        Turn { a: Direction::new(a.edge, Elem::ID), b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn vertex(&self, g: &Graph) -> VertexId {
        self.a.vertex(g)
    }

    /// Both directions lie on edges of the given predicate.
    pub fn within(&self, pred: impl Fn(OEdge) -> bool) -> bool {
        pred(self.a.edge) && pred(self.b.edge)
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("{{{}, {}}}", self.a.display(g), self.b.display(g))
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{({:?},{}),({:?},{})}}", self.a.edge, self.a.elem.0, self.b.edge, self.b.elem.0)
    }
}

/// All canonical nondegenerate turns at `v`.
pub fn turns_at(g: &Graph, v: VertexId) -> Vec<Turn> {
    let star = g.star(v);
    let grp = g.group(v);
    let mut out = Vec::new();
    for (i, &o1) in star.iter().enumerate() {
        for &o2 in &star[i..] {
            for x in grp.elements() {
                if o1 == o2 && (x.is_id() || grp.inv(x) < x) {
                    continue;
                }
                out.push(Turn { a: Direction::new(o1, Elem::ID), b: Direction::new(o2, x) });
            }
        }
    }
    out
}

impl GraphMap {
    /// Df on a direction: `(g, e) ↦ (f_v(g)·h⁻¹, a)` where the image of `e` ends in `a·h`.
    /// `None` when the image of `e` has no edges.
    pub fn derivative(&self, src: &Graph, dst: &Graph, d: Direction) -> Option<Direction> {
        let v = src.term(d.edge);
        let p = &self.edge_images[d.edge.edge().0];
        let (a, h) = if d.edge.is_reversed() {
            // image(ē) = reverse(image(e)): last edge is the reverse of the first, trailing is lead⁻¹
            (p.first_edge()?.rev(), dst.group(p.start()).inv(p.lead()))
        } else {
            (p.last_edge()?, p.trail())
        };
        let w = dst.term(a);
        debug_assert_eq!(w, self.vertex_map[v.0]);
        let grp = dst.group(w);
        let x = grp.mul(self.vertex_homs[v.0].apply(d.elem), grp.inv(h));
        Some(Direction::new(a, x))
    }

    pub fn turn_image(&self, src: &Graph, dst: &Graph, t: &Turn) -> Option<Turn> {
        let a = self.derivative(src, dst, t.a)?;
        let b = self.derivative(src, dst, t.b)?;
        Some(Turn::new(dst, a, b))
    }
}

/// Turns taken by a path, with the slot index at which each is taken.
pub fn turns_taken(g: &Graph, p: &EdgePath) -> Vec<(usize, Turn)> {
    let edges = p.edges();
    (1..edges.len())
        .map(|i| {
            let t = Turn::new(g, Direction::new(edges[i - 1], Elem::ID), Direction::new(edges[i].rev(), p.elems()[i]));
            (i, t)
        })
        .collect()
}

/// Memoized legality of turns under a self-map.
pub struct Legality<'a> {
    g: &'a Graph,
    f: &'a GraphMap,
    memo: HashMap<Turn, bool>,
    cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("turn iteration exceeded {0} steps")]
pub struct IterationCapExceeded(pub usize);

impl<'a> Legality<'a> {
    pub fn new(g: &'a Graph, f: &'a GraphMap) -> Self {
        let cap = g.vertex_ids().map(|v| g.valence(v).pow(2) * g.group(v).order()).sum::<usize>() + 2;
        Legality { g, f, memo: HashMap::new(), cap }
    }

    pub fn image(&self, t: &Turn) -> Option<Turn> {
        self.f.turn_image(self.g, self.g, t)
    }

    pub fn try_is_legal(&mut self, t: &Turn) -> Result<bool, IterationCapExceeded> {
        let mut seen = Vec::new();
        let mut cur = *t;
        let verdict = loop {
            if let Some(&v) = self.memo.get(&cur) {
                break v;
            }
            if cur.is_degenerate() {
                break false;
            }
            if seen.contains(&cur) {
                break true;
            }
            if seen.len() > self.cap {
                return Err(IterationCapExceeded(self.cap));
            }
            seen.push(cur);
            match self.image(&cur) {
                Some(next) => cur = next,
                // an edge with trivial image: the turn collapses
                None => break false,
            }
        };
        for s in seen {
            self.memo.insert(s, verdict);
        }
        Ok(verdict)
    }

    pub fn is_legal(&mut self, t: &Turn) -> bool {
        self.try_is_legal(t).expect("finite vertex groups bound the turn orbit")
    }

    /// `T_0 = t, T_1 = Df(t), …, T_k` degenerate; `None` if `t` is legal.
    pub fn illegal_orbit(&mut self, t: &Turn) -> Option<Vec<Turn>> {
        if self.is_legal(t) {
            return None;
        }
        let mut orbit = vec![*t];
        let mut cur = *t;
        while !cur.is_degenerate() {
            cur = self.image(&cur)?;
            orbit.push(cur);
        }
        Some(orbit)
    }
}
