//! Elementary moves on topological representatives.
//!
//! Every move returns a [`MoveReceipt`]: the new representative together with
//! a forward homotopy equivalence from the old graph and a homotopy inverse.
//! Markings are carried along as `sigma' = forward ∘ sigma` and
//! `rho' = rho ∘ backward`.

mod contract;
mod core_subdivision;
mod fold;
mod quotient;
mod subdivide;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use contract::{collapse, invariant_forest, pretrivial_forest, valence_one, valence_two};
pub use core_subdivision::{collapse_connecting_path, core_points, invariant_core_subdivision, pinch};
pub use fold::{descent_round, fold, fold_round, fold_round_span, fold_turn, fold_turn_span, twist, FoldSpan};
pub use subdivide::{subdivide, subdivide_many};

use crate::gog::{Graph, GraphInvariants, VertexId};
use crate::groups::{Elem, FiniteGroup};
use crate::rep::{Direction, GraphMap, RepError, TopRep, Turn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveKind {
    Subdivide { cuts: Vec<(String, Vec<usize>)> },
    /// Subdivision at core endpoints; each entry names an edge and its `L`/`R` points.
    CoreSubdivide { points: Vec<String> },
    Fold { kept: String, dropped: String },
    Twist { edge: String, elem: String },
    Reframe { vertex: String, elem: String },
    Tighten,
    Collapse { edges: Vec<String> },
    ValenceOne { vertex: String, edge: String },
    ValenceTwo { vertex: String, collapsed: String, expanded: String },
    /// An edge crossed once by a path with trivial image is deleted and the
    /// path's endpoints identified.
    Pinch { edge: String },
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::Subdivide { .. } => "subdivide",
            MoveKind::CoreSubdivide { .. } => "core-subdivide",
            MoveKind::Fold { .. } => "fold",
            MoveKind::Twist { .. } => "twist",
            MoveKind::Reframe { .. } => "reframe",
            MoveKind::Tighten => "tighten",
            MoveKind::Collapse { .. } => "collapse",
            MoveKind::ValenceOne { .. } => "valence-one",
            MoveKind::ValenceTwo { .. } => "valence-two",
            MoveKind::Pinch { .. } => "pinch",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            MoveKind::Subdivide { cuts } => {
                let parts: Vec<String> = cuts
                    .iter()
                    .map(|(e, ks)| {
                        let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                        format!("{e}@{}", ks.join("|"))
                    })
                    .collect();
                write!(f, " {}", parts.join(","))
            }
            MoveKind::CoreSubdivide { points } => write!(f, " {}", points.join(",")),
            MoveKind::Fold { kept, dropped } => write!(f, " {kept} {dropped}"),
            MoveKind::Twist { edge, elem } => write!(f, " {edge} {elem}"),
            MoveKind::Reframe { vertex, elem } => write!(f, " {vertex} {elem}"),
            MoveKind::Tighten => Ok(()),
            MoveKind::Collapse { edges } => write!(f, " {{{}}}", edges.join(",")),
            MoveKind::ValenceOne { vertex, edge } => write!(f, " {vertex} {edge}"),
            MoveKind::ValenceTwo { vertex, collapsed, expanded } => {
                write!(f, " {vertex} collapse={collapsed} expand={expanded}")
            }
            MoveKind::Pinch { edge } => write!(f, " {edge}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("position {position} out of range for edge {edge} (image length {len})")]
    PositionOutOfRange { edge: String, position: usize, len: usize },
    #[error("images of {0} and {1} disagree")]
    ImagesDisagree(String, String),
    #[error("fold of {0} and {1} would merge two nontrivial vertex groups")]
    BothEndpointsNontrivial(String, String),
    #[error("turn {0} does not fold: its image is not degenerate")]
    NotFoldable(String),
    #[error("unsupported move: {0}")]
    Unsupported(String),
    #[error("subgraph {0:?} is not invariant")]
    NotInvariant(Vec<String>),
    #[error("subgraph {0:?} is not a collapsible forest")]
    NotCollapsible(Vec<String>),
    #[error("vertex {0} is not an inessential valence-one vertex")]
    NotInessentialValenceOne(String),
    #[error("vertex {0} is not an inessential valence-two vertex (with the named edge)")]
    NotInessentialValenceTwo(String),
    #[error("element out of range at vertex {0}")]
    BadElement(String),
    #[error("stratum {0} is not exponentially growing")]
    NotEG(usize),
    #[error("connecting path has nontrivial image")]
    ImageNotTrivial,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// The outcome of one elementary move.
#[derive(Debug, Clone)]
pub struct MoveReceipt {
    pub kind: MoveKind,
    /// Old graph → new graph.
    pub forward: GraphMap,
    /// New graph → old graph, a homotopy inverse of `forward`.
    pub backward: GraphMap,
    /// η, β, complexity of the old graph.
    pub before: GraphInvariants,
    pub rep: TopRep,
}

impl MoveReceipt {
    pub(crate) fn new(
        kind: MoveKind,
        old: &TopRep,
        graph: Graph,
        map: GraphMap,
        forward: GraphMap,
        backward: GraphMap,
    ) -> MoveReceipt {
        let marking = old.marking.as_ref().map(|m| m.transport(&old.graph, &graph, &forward, &backward));
        let rep = TopRep { graph, map, marking };
        debug_assert!(rep.validate_map().is_ok(), "{kind}: {:?}", rep.validate_map());
        let r = MoveReceipt { kind, forward, backward, before: old.graph.invariants(), rep };
        debug_assert!(r.invariants_preserved(), "{} changed the graph invariants", r.kind);
        r
    }

    pub fn invariants_preserved(&self) -> bool {
        self.before == self.rep.graph.invariants()
    }

    /// The new representative has an untight or edgeless image.
    pub fn needs_cleanup(&self) -> bool {
        self.rep.map.edge_images.iter().any(|p| p.is_empty() || !p.is_tight(&self.rep.graph))
    }

    /// Dπ on a direction of the old graph.
    pub fn push_direction(&self, old: &Graph, d: Direction) -> Option<Direction> {
        self.forward.derivative(old, &self.rep.graph, d)
    }

    pub fn push_turn(&self, old: &Graph, t: &Turn) -> Option<Turn> {
        self.forward.turn_image(old, &self.rep.graph, t)
    }
}

/// A trivial group shared with the graph where possible.
pub(crate) fn trivial_group(g: &Graph) -> Arc<FiniteGroup> {
    g.vertices
        .iter()
        .find(|v| v.group.is_trivial())
        .map(|v| v.group.clone())
        .unwrap_or_else(|| Arc::new(FiniteGroup::trivial("1")))
}

/// Tighten every image.
pub fn tighten_rep(f: &TopRep) -> MoveReceipt {
    let g = &f.graph;
    let mut map = f.map.clone();
    map.tighten(g);
    MoveReceipt::new(MoveKind::Tighten, f, g.clone(), map, GraphMap::identity(g), GraphMap::identity(g))
}

/// Homotopy across a vertex with trivial group: every image ending at `v`
/// is multiplied on the right by `z ∈ 𝒢_{f(v)}`. Paths through `v` keep their images.
pub fn reframe(f: &TopRep, v: VertexId, z: Elem) -> Result<MoveReceipt, MoveError> {
    let g = &f.graph;
    let name = g.vertices[v.0].name.clone();
    if !g.is_trivial(v) {
        return Err(MoveError::Unsupported(format!("reframe at {name}, which has a nontrivial group")));
    }
    let w = f.map.vertex_map[v.0];
    let grp = g.group(w);
    grp.check(z).map_err(|_| MoveError::BadElement(name.clone()))?;
    let mut map = f.map.clone();
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let mut p = map.edge_images[e.0].clone();
        if ed.to == v {
            p = p.mul_right(g, z);
        }
        if ed.from == v {
            p = p.mul_left(g, grp.inv(z));
        }
        map.edge_images[e.0] = p;
    }
    let kind = MoveKind::Reframe { vertex: name, elem: grp.display_elem(z) };
    Ok(MoveReceipt::new(kind, f, g.clone(), map, GraphMap::identity(g), GraphMap::identity(g)))
}

/// Tighten, then collapse maximal pretrivial forests until none remain.
pub fn cleanup(f: &TopRep) -> Result<Vec<MoveReceipt>, MoveError> {
    let mut steps = Vec::new();
    let mut cur = f.clone();
    loop {
        if cur.map.edge_images.iter().any(|p| !p.is_tight(&cur.graph)) {
            let r = tighten_rep(&cur);
            cur = r.rep.clone();
            steps.push(r);
        }
        let s = pretrivial_forest(&cur);
        if s.is_empty() {
            break;
        }
        let r = collapse(&cur, &s)?;
        cur = r.rep.clone();
        steps.push(r);
    }
    Ok(steps)
}
