//! Cyclic normal forms and conjugacy of loops.

use super::graph::{Graph, OEdge, VertexId};
use super::path::{EdgePath, PathBuilder, PathError};
use crate::groups::Elem;

/// Conjugacy-class invariant of a closed path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CyclicWord {
    Trivial,
    /// A nontrivial element of one vertex group, as the least element of its class.
    Elliptic { vertex: VertexId, elem: Elem },
    /// Tokens `(e_i, x_i)` read cyclically, rotated to the lexicographic minimum.
    Hyperbolic { tokens: Vec<(OEdge, Elem)> },
}

/// A tight loop written as `prefix · core · reverse(prefix)`, with `core` cyclically tight.
#[derive(Debug, Clone)]
pub struct LoopDecomposition {
    pub prefix: EdgePath,
    pub core: Core,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Core {
    Element { vertex: VertexId, elem: Elem },
    /// Cyclically tight tokens; the core path is `e1 x1 e2 x2 … en xn` with identity lead.
    Tokens { vertex: VertexId, tokens: Vec<(OEdge, Elem)> },
}

impl Core {
    pub fn vertex(&self) -> VertexId {
        match self {
            Core::Element { vertex, .. } | Core::Tokens { vertex, .. } => *vertex,
        }
    }

    pub fn to_path(&self, g: &Graph) -> EdgePath {
        match self {
            Core::Element { vertex, elem } => EdgePath::element(*vertex, *elem),
            Core::Tokens { vertex, tokens } => tokens_path(g, *vertex, tokens),
        }
    }
}

fn tokens_path(g: &Graph, start: VertexId, tokens: &[(OEdge, Elem)]) -> EdgePath {
    let mut b = PathBuilder::raw(g, start);
    for &(o, x) in tokens {
        b.push_edge(o);
        b.push_elem(x);
    }
    b.finish()
}

/// Split a closed path into conjugating prefix and cyclically tight core.
pub fn decompose_loop(g: &Graph, l: &EdgePath) -> Result<LoopDecomposition, PathError> {
    if !l.is_closed(g) {
        return Err(PathError::NotClosed);
    }
    let t = l.tighten(g);
    let mut prefix = PathBuilder::raw(g, t.start());
    let mut lo = 0usize;
    let mut hi = t.len();
    let elems = t.elems();
    let edges = t.edges();
    // Current loop: elems[lo] edges[lo] … edges[hi-1] elems[hi], with `lead`/`trail` overrides.
    let mut lead = elems[0];
    let mut trail = elems[hi];
    loop {
        let v = t.slot_vertex(g, lo);
        let grp = g.group(v);
        if hi - lo >= 2 && edges[hi - 1] == edges[lo].rev() && grp.mul(trail, lead).is_id() {
            prefix.push_elem(lead);
            prefix.push_edge(edges[lo]);
            lo += 1;
            hi -= 1;
            lead = elems[lo];
            trail = elems[hi];
            continue;
        }
        break;
    }
    let v = t.slot_vertex(g, lo);
    let grp = g.group(v);
    if hi == lo {
        // lead and trail are the same slot
        return Ok(LoopDecomposition { prefix: prefix.finish(), core: Core::Element { vertex: v, elem: elems[lo] } });
    }
    prefix.push_elem(lead);
    let mut tokens = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let x = if i + 1 == hi { grp.mul(trail, lead) } else { elems[i + 1] };
        tokens.push((edges[i], x));
    }
    Ok(LoopDecomposition { prefix: prefix.finish(), core: Core::Tokens { vertex: v, tokens } })
}

/// Least rotation index of a token cycle.
fn least_rotation(tokens: &[(OEdge, Elem)]) -> usize {
    let n = tokens.len();
    (0..n)
        .min_by(|&a, &b| {
            (0..n).map(|i| tokens[(a + i) % n]).cmp((0..n).map(|i| tokens[(b + i) % n]))
        })
        .unwrap_or(0)
}

pub fn cyclic_word(g: &Graph, l: &EdgePath) -> Result<CyclicWord, PathError> {
    let d = decompose_loop(g, l)?;
    Ok(match d.core {
        Core::Element { elem, .. } if elem.is_id() => CyclicWord::Trivial,
        Core::Element { vertex, elem } => CyclicWord::Elliptic { vertex, elem: g.group(vertex).class_min(elem) },
        Core::Tokens { tokens, .. } => {
            let s = least_rotation(&tokens);
            let n = tokens.len();
            CyclicWord::Hyperbolic { tokens: (0..n).map(|i| tokens[(s + i) % n]).collect() }
        }
    })
}

/// Canonical cyclically tight representative of the conjugacy class of a loop.
pub fn cyclic_tighten(g: &Graph, l: &EdgePath) -> Result<EdgePath, PathError> {
    let d = decompose_loop(g, l)?;
    Ok(match cyclic_word(g, l)? {
        CyclicWord::Trivial => EdgePath::trivial(d.core.vertex()),
        CyclicWord::Elliptic { vertex, elem } => EdgePath::element(vertex, elem),
        CyclicWord::Hyperbolic { tokens } => tokens_path(g, g.origin(tokens[0].0), &tokens),
    })
}

pub fn loops_conjugate(g: &Graph, a: &EdgePath, b: &EdgePath) -> Result<bool, PathError> {
    Ok(cyclic_word(g, a)? == cyclic_word(g, b)?)
}

fn conj(g: &Graph, c: &EdgePath, x: &EdgePath) -> EdgePath {
    let mut b = PathBuilder::tight(g, c.start());
    b.push_path(c);
    b.push_path(x);
    b.push_path(&c.reverse(g));
    b.finish()
}

fn power(g: &Graph, x: &EdgePath, k: i64) -> EdgePath {
    let base = if k < 0 { x.reverse(g) } else { x.clone() };
    let mut b = PathBuilder::tight(g, x.start());
    for _ in 0..k.unsigned_abs() {
        b.push_path(&base);
    }
    b.finish()
}

/// Whether a single loop `c` based at the common basepoint conjugates every `xs[i]`
/// to `ys[i]`. Returns such a `c` when one exists.
///
/// All loops must be based at the same vertex.
pub fn simultaneous_conjugator(g: &Graph, xs: &[EdgePath], ys: &[EdgePath]) -> Option<EdgePath> {
    assert_eq!(xs.len(), ys.len());
    let xs: Vec<EdgePath> = xs.iter().map(|p| p.tighten(g)).collect();
    let ys: Vec<EdgePath> = ys.iter().map(|p| p.tighten(g)).collect();
    let base = xs.first().map(|p| p.start())?;
    let works = |c: &EdgePath| xs.iter().zip(&ys).all(|(x, y)| &conj(g, c, x) == y);
    let Some(i) = xs.iter().position(|x| !x.is_trivial()) else {
        return ys.iter().all(|y| y.is_trivial()).then(|| EdgePath::trivial(base));
    };
    let dx = decompose_loop(g, &xs[i]).ok()?;
    let dy = decompose_loop(g, &ys[i]).ok()?;
    let mut candidates = Vec::new();
    match (&dx.core, &dy.core) {
        (Core::Element { vertex: u, elem: gx }, Core::Element { vertex: w, elem: gy }) if u == w => {
            let grp = g.group(*u);
            for k in grp.elements() {
                if grp.conj(k, *gx) == *gy {
                    let mut b = PathBuilder::tight(g, base);
                    b.push_path(&dy.prefix);
                    b.push_elem(k);
                    b.push_path(&dx.prefix.reverse(g));
                    candidates.push(b.finish());
                }
            }
        }
        (Core::Tokens { vertex: u, tokens: tx }, Core::Tokens { tokens: ty, .. }) if tx.len() == ty.len() => {
            let n = tx.len();
            let core_x = dx.core.to_path(g);
            let total: usize = xs.iter().chain(&ys).map(|p| p.len()).sum();
            let jmax = (total / n + 2) as i64;
            for s in 0..n {
                if (0..n).all(|k| tx[(s + k) % n] == ty[k]) {
                    // rotation prefix R_s = first s tokens of the core
                    let r = tokens_path(g, *u, &tx[..s]);
                    let mut b = PathBuilder::tight(g, base);
                    b.push_path(&dy.prefix);
                    b.push_path(&r.reverse(g));
                    b.push_path(&dx.prefix.reverse(g));
                    let c0 = b.finish();
                    let xi = conj(g, &dx.prefix, &core_x);
                    for j in -jmax..=jmax {
                        let mut b = PathBuilder::tight(g, base);
                        b.push_path(&c0);
                        b.push_path(&power(g, &xi, j));
                        candidates.push(b.finish());
                    }
                }
            }
        }
        _ => return None,
    }
    candidates.into_iter().find(|c| works(c))
}
