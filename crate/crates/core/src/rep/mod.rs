//! Topological representatives: the action on paths, transition matrices,
//! turns, legality and markings.

mod map;
mod outer;
mod turns;

use std::collections::BTreeSet;

use thiserror::Error;

pub use map::{carry_hom, compose_homs, GraphMap, MapError};
pub use outer::{basis_loops, outer_images, verify_outer_class};
pub use turns::{turns_at, turns_taken, Direction, IterationCapExceeded, Legality, Turn};

use crate::gog::{EdgeId, EdgePath, Graph, OEdge, Subgraph};
use crate::spectral::{is_aperiodic, is_irreducible, PfValue, SpectralError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("image of {0} is not tight")]
    UntightImage(String),
    #[error("image of {0} has no edges")]
    TrivialImage(String),
    #[error("marking: {0}")]
    BadMarking(String),
    #[error("representative carries no marking")]
    MarkingMissing,
}

/// A homotopy equivalence from a base graph of groups, with a homotopy inverse.
/// `sigma: base → graph`, `rho: graph → base`.
#[derive(Debug, Clone)]
pub struct Marking {
    pub base: Graph,
    pub sigma: GraphMap,
    pub rho: GraphMap,
}

impl Marking {
    pub fn identity(g: &Graph) -> Marking {
        Marking { base: g.clone(), sigma: GraphMap::identity(g), rho: GraphMap::identity(g) }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), RepError> {
        self.sigma.validate(&self.base, g).map_err(|e| RepError::BadMarking(format!("sigma: {e}")))?;
        self.rho.validate(g, &self.base).map_err(|e| RepError::BadMarking(format!("inverse: {e}")))?;
        Ok(())
    }

    /// Transport along a move `old → new` with forward map `pi` and backward map `back`.
    pub fn transport(&self, old: &Graph, new: &Graph, pi: &GraphMap, back: &GraphMap) -> Marking {
        Marking {
            base: self.base.clone(),
            sigma: self.sigma.then(&self.base, old, pi, new),
            rho: back.then(new, old, &self.rho, &self.base),
        }
    }
}

/// Nonnegative integer matrix indexed by edges; `rows[i][j]` counts edge i in the image of edge j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub rows: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_irreducible(&self) -> bool {
        is_irreducible(&self.rows)
    }

    pub fn is_aperiodic(&self) -> bool {
        is_aperiodic(&self.rows)
    }

    pub fn pf_eigenvalue(&self) -> Result<PfValue, SpectralError> {
        PfValue::of_matrix(&self.rows)
    }

    /// Principal submatrix on the given edges, in the given order.
    pub fn block(&self, edges: &[EdgeId]) -> Vec<Vec<u64>> {
        edges.iter().map(|i| edges.iter().map(|j| self.rows[i.0][j.0]).collect()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.size()).map(|j| self.rows.iter().map(|r| r[j]).sum()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct TopRep {
    pub graph: Graph,
    pub map: GraphMap,
    pub marking: Option<Marking>,
}

/// An illegal turn taken in the image of `edge`, at element slot `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offender {
    pub edge: EdgeId,
    pub position: usize,
    pub turn: Turn,
}

impl TopRep {
    /// Validated construction: images tight and nontrivial, maps consistent.
    pub fn new(graph: Graph, map: GraphMap, marking: Option<Marking>) -> Result<TopRep, RepError> {
        let f = TopRep { graph, map, marking };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), RepError> {
        self.validate_map()?;
        for e in self.graph.edge_ids() {
            let p = self.map.forward_image(e);
            let name = self.graph.edge(e).name.clone();
            if p.is_empty() {
                return Err(RepError::TrivialImage(name));
            }
            if !p.is_tight(&self.graph) {
                return Err(RepError::UntightImage(name));
            }
        }
        Ok(())
    }

    /// Structural checks only; images may be untight or trivial.
    pub fn validate_map(&self) -> Result<(), RepError> {
        self.map.validate(&self.graph, &self.graph)?;
        if let Some(m) = &self.marking {
            m.validate(&self.graph)?;
        }
        Ok(())
    }

    pub fn with_identity_marking(mut self) -> TopRep {
        self.marking = Some(Marking::identity(&self.graph));
        self
    }

    pub fn image(&self, o: OEdge) -> EdgePath {
        self.map.image(&self.graph, &self.graph, o)
    }

    /// f♯(p).
    pub fn apply(&self, p: &EdgePath) -> EdgePath {
        self.map.apply(&self.graph, &self.graph, p)
    }

    pub fn apply_raw(&self, p: &EdgePath) -> EdgePath {
        self.map.apply_raw(&self.graph, &self.graph, p)
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        let n = self.graph.num_edges();
        let mut rows = vec![vec![0u64; n]; n];
        for (j, p) in self.map.edge_images.iter().enumerate() {
            for o in p.edges() {
                rows[o.edge().0][j] += 1;
            }
        }
        TransitionMatrix { rows }
    }

    pub fn pf(&self) -> Result<PfValue, SpectralError> {
        self.transition_matrix().pf_eigenvalue()
    }

    pub fn derivative(&self, d: Direction) -> Option<Direction> {
        self.map.derivative(&self.graph, &self.graph, d)
    }

    pub fn turn_image(&self, t: &Turn) -> Option<Turn> {
        self.map.turn_image(&self.graph, &self.graph, t)
    }

    pub fn turns_taken(&self, p: &EdgePath) -> Vec<Turn> {
        turns_taken(&self.graph, p).into_iter().map(|(_, t)| t).collect()
    }

    pub fn legality(&self) -> Legality<'_> {
        Legality::new(&self.graph, &self.map)
    }

    pub fn is_turn_legal(&self, t: &Turn) -> Result<bool, IterationCapExceeded> {
        self.legality().try_is_legal(t)
    }

    /// All illegal turns taken by images, ordered by (edge id, position).
    pub fn train_track_offenders(&self) -> Vec<Offender> {
        let mut legal = self.legality();
        let mut out = Vec::new();
        for e in self.graph.edge_ids() {
            for (position, turn) in turns_taken(&self.graph, self.map.forward_image(e)) {
                if !legal.is_legal(&turn) {
                    out.push(Offender { edge: e, position, turn });
                }
            }
        }
        out
    }

    pub fn is_train_track(&self) -> bool {
        self.train_track_offenders().is_empty()
    }

    /// Edges appearing in iterated images of `start`, including `start`.
    pub fn orbit_closure(&self, start: &BTreeSet<EdgeId>) -> BTreeSet<EdgeId> {
        let mut out = start.clone();
        let mut stack: Vec<EdgeId> = start.iter().copied().collect();
        while let Some(e) = stack.pop() {
            for o in self.map.forward_image(e).edges() {
                if out.insert(o.edge()) {
                    stack.push(o.edge());
                }
            }
        }
        out
    }

    pub fn is_invariant(&self, s: &Subgraph) -> bool {
        s.edges.iter().all(|&e| self.map.forward_image(e).edges().iter().all(|o| s.contains(o.edge())))
            && s.vertices(&self.graph).iter().all(|v| {
                let w = self.map.vertex_map[v.0];
                s.is_empty() || s.vertices(&self.graph).contains(&w)
            })
    }
}
