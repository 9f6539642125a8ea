//! Thistle representatives of automorphisms and the train track algorithm for
//! irreducible representatives.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gog::{decompose_loop, Core, Edge, EdgeId, EdgePath, Graph, OEdge, PathBuilder, Subgraph, Vertex, VertexId};
use crate::groups::{Elem, FiniteGroup, GroupIso};
use crate::moves::{
    cleanup, collapse, descent_round, fold_round_span, FoldSpan, invariant_forest, twist, valence_one, valence_two, MoveError, MoveReceipt,
};
use crate::rep::{GraphMap, Marking, RepError, TopRep, Turn};
use crate::rtt::{maximal_filtration, pf_compare, PfSequence};
use crate::spectral::pf_eigenvector;
use crate::trace::{RoundKind, Trace};

pub const DEFAULT_BUDGET: usize = 10_000;

/// A letter of a word in `A_1 * … * A_n * F_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// An element of the factor `A_factor` (0-based).
    Elem { factor: usize, elem: Elem },
    /// The free basis letter `x_index` (0-based), or its inverse.
    Free { index: usize, inverse: bool },
}

impl Letter {
    pub fn inverse(self, factors: &[Arc<FiniteGroup>]) -> Letter {
        match self {
            Letter::Elem { factor, elem } => Letter::Elem { factor, elem: factors[factor].inv(elem) },
            Letter::Free { index, inverse } => Letter::Free { index, inverse: !inverse },
        }
    }
}

/// An endomorphism of `A_1 * … * A_n * F_k`, given on generators.
#[derive(Debug, Clone)]
pub struct AutomorphismInput {
    pub factors: Vec<Arc<FiniteGroup>>,
    pub rank: usize,
    /// `factor_images[i][j]` is the image of the `j`-th generator of `A_i`.
    pub factor_images: Vec<Vec<Vec<Letter>>>,
    pub free_images: Vec<Vec<Letter>>,
}

impl AutomorphismInput {
    pub fn identity(factors: Vec<Arc<FiniteGroup>>, rank: usize) -> AutomorphismInput {
        let factor_images = factors
            .iter()
            .enumerate()
            .map(|(i, a)| a.generators().iter().map(|&g| vec![Letter::Elem { factor: i, elem: g }]).collect())
            .collect();
        let free_images = (0..rank).map(|j| vec![Letter::Free { index: j, inverse: false }]).collect();
        AutomorphismInput { factors, rank, factor_images, free_images }
    }

    pub fn validate(&self) -> Result<(), TtError> {
        if self.factors.is_empty() && self.rank == 0 {
            return Err(TtError::EmptySignature);
        }
        if self.factor_images.len() != self.factors.len() || self.free_images.len() != self.rank {
            return Err(TtError::Malformed("image count does not match the signature".into()));
        }
        for (i, a) in self.factors.iter().enumerate() {
            if a.is_trivial() {
                return Err(TtError::Malformed(format!("factor {} is trivial", i + 1)));
            }
            if self.factor_images[i].len() != a.generators().len() {
                return Err(TtError::Malformed(format!("factor {} needs {} generator images", i + 1, a.generators().len())));
            }
        }
        let words = self.factor_images.iter().flatten().chain(&self.free_images);
        for w in words {
            for l in w {
                match *l {
                    Letter::Elem { factor, elem } => {
                        let a = self.factors.get(factor).ok_or_else(|| TtError::Malformed(format!("no factor {}", factor + 1)))?;
                        a.check(elem).map_err(|e| TtError::Malformed(e.to_string()))?;
                    }
                    Letter::Free { index, .. } if index >= self.rank => {
                        return Err(TtError::Malformed(format!("no free letter x{}", index + 1)));
                    }
                    Letter::Free { .. } => {}
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TtError {
    #[error("signature has no factors and rank 0")]
    EmptySignature,
    #[error("malformed automorphism: {0}")]
    Malformed(String),
    #[error("inconsistent vertex image: {0}")]
    InconsistentVertexImage(String),
    #[error("representative is reducible; invariant subgraph {{{}}}", witness.join(","))]
    Reducible { witness: Vec<String>, trace: Box<Trace>, rep: Box<TopRep> },
    #[error("move budget of {budget} exhausted")]
    BudgetExceeded { budget: usize, trace: Box<Trace>, rep: Box<TopRep> },
    #[error("descent round did not decrease the Perron-Frobenius data (before {before}, after {after})")]
    NoDescent { before: String, after: String, trace: Box<Trace> },
    #[error("no repair applies:\n{0}")]
    Stalled(String),
    #[error("valence-two homotopy at {0} would increase the Perron-Frobenius data either way")]
    ValenceTwoIncrease(String),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// The thistle for `A_1 * … * A_n * F_k`: a trivial vertex `*`, prickle edges
/// `e_i` from `v_i` (group `A_i`) to `*`, and petal loops at `*`.
pub fn build_thistle(factors: &[Arc<FiniteGroup>], rank: usize) -> Result<(Graph, Marking), TtError> {
    if factors.is_empty() && rank == 0 {
        return Err(TtError::EmptySignature);
    }
    let star_group = Arc::new(FiniteGroup::trivial("1"));
    let mut vertices = vec![Vertex { name: "*".into(), group: star_group }];
    let mut edges = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        vertices.push(Vertex { name: format!("v{}", i + 1), group: a.clone() });
        edges.push(Edge { name: format!("e{}", i + 1), from: VertexId(i + 1), to: VertexId(0) });
    }
    for j in 0..rank {
        edges.push(Edge { name: format!("e{}", factors.len() + j + 1), from: VertexId(0), to: VertexId(0) });
    }
    let g = Graph::new(vertices, edges).map_err(|e| TtError::Malformed(e.to_string()))?;
    let m = Marking::identity(&g);
    Ok((g, m))
}

/// The loop at `*` spelling a word: `ē_i·a·e_i` for `a ∈ A_i`, petals for free letters. Tightened.
pub fn word_path(g: &Graph, n: usize, word: &[Letter]) -> EdgePath {
    let mut b = PathBuilder::tight(g, VertexId(0));
    for l in word {
        match *l {
            Letter::Elem { factor, elem } => {
                let e = OEdge::fwd(EdgeId(factor));
                b.push_edge(e.rev());
                b.push_elem(elem);
                b.push_edge(e);
            }
            Letter::Free { index, inverse } => b.push_edge(OEdge::new(EdgeId(n + index), inverse)),
        }
    }
    b.finish()
}

/// A representative of the automorphism on its thistle, with the identity marking.
pub fn rep_from_automorphism(a: &AutomorphismInput) -> Result<TopRep, TtError> {
    a.validate()?;
    let n = a.factors.len();
    let (g, marking) = build_thistle(&a.factors, a.rank)?;
    let mut vertex_map = vec![VertexId(0); g.num_vertices()];
    let mut vertex_homs = vec![GroupIso::identity(g.group(VertexId(0)))];
    let mut edge_images = Vec::with_capacity(g.num_edges());
    for (i, grp) in a.factors.iter().enumerate() {
        let vname = || format!("v{}", i + 1);
        let gens = grp.generators();
        let first = word_path(&g, n, &a.factor_images[i][0]);
        let dec = decompose_loop(&g, &first).map_err(|e| TtError::Malformed(e.to_string()))?;
        let target = match dec.core {
            Core::Element { vertex, .. } if !g.is_trivial(vertex) => vertex,
            _ => {
                return Err(TtError::InconsistentVertexImage(format!(
                    "the first generator of {} does not map into a vertex group",
                    vname()
                )))
            }
        };
        let back = dec.prefix.reverse(&g);
        let mut images = Vec::with_capacity(gens.len());
        for (j, &x) in gens.iter().enumerate() {
            let p = word_path(&g, n, &a.factor_images[i][j]);
            let mut b = PathBuilder::tight(&g, target);
            b.push_path(&back);
            b.push_path(&p);
            b.push_path(&dec.prefix);
            let q = b.finish();
            if !q.is_empty() || q.start() != target {
                return Err(TtError::InconsistentVertexImage(format!(
                    "generators of {} are not conjugated into one vertex group by a common element",
                    vname()
                )));
            }
            images.push((x, q.lead()));
        }
        let iso = GroupIso::from_generators(grp, g.group(target), &images)
            .map_err(|e| TtError::InconsistentVertexImage(format!("{}: {e}", vname())))?;
        vertex_map[i + 1] = target;
        vertex_homs.push(iso);
        edge_images.push(back);
    }
    for j in 0..a.rank {
        let p = word_path(&g, n, &a.free_images[j]);
        if p.is_empty() {
            return Err(TtError::Malformed(format!("x{} maps into a vertex group", j + 1)));
        }
        edge_images.push(p);
    }
    let map = GraphMap { vertex_map, vertex_homs, edge_images };
    Ok(TopRep::new(g, map, Some(marking))?)
}

/// A representative together with the moves applied to it so far.
#[derive(Clone)]
pub(crate) struct Run {
    pub cur: TopRep,
    pub trace: Trace,
    pub budget: usize,
}

impl Run {
    pub fn new(f: &TopRep, budget: usize) -> Run {
        Run { cur: f.clone(), trace: Trace::new(f), budget }
    }

    pub fn commit(&mut self, r: MoveReceipt) -> Result<(), TtError> {
        if self.trace.steps.len() >= self.budget {
            return Err(self.budget_error());
        }
        self.trace.record(&self.cur, &r);
        self.cur = r.rep;
        Ok(())
    }

    pub fn commit_all(&mut self, rs: Vec<MoveReceipt>) -> Result<(), TtError> {
        rs.into_iter().try_for_each(|r| self.commit(r))
    }

    pub fn budget_error(&self) -> TtError {
        TtError::BudgetExceeded {
            budget: self.budget,
            trace: Box::new(self.trace.clone()),
            rep: Box::new(self.cur.clone()),
        }
    }

    pub fn cleanup(&mut self) -> Result<(), TtError> {
        let rs = cleanup(&self.cur)?;
        self.commit_all(rs)
    }
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub rep: TopRep,
    pub trace: Trace,
    /// One trivial vertex with a single loop; left as is.
    pub single_loop: bool,
    /// At most `2η + 3β − 3` edges.
    pub within_bound: bool,
}

pub fn is_single_loop(g: &Graph) -> bool {
    g.num_vertices() == 1 && g.num_edges() == 1 && g.is_trivial(VertexId(0))
}

pub fn within_edge_bound(g: &Graph) -> bool {
    is_single_loop(g) || g.num_edges() as i64 <= g.invariants().edge_bound
}

/// Tighten, collapse pretrivial and invariant forests, and remove inessential
/// valence-one and valence-two vertices until none of these applies.
pub fn normalize(f: &TopRep) -> Result<Normalized, TtError> {
    let mut run = Run::new(f, usize::MAX);
    normalize_run(&mut run, &Mode::Absolute)?;
    let g = &run.cur.graph;
    Ok(Normalized { single_loop: is_single_loop(g), within_bound: within_edge_bound(g), rep: run.cur, trace: run.trace })
}

/// How valence-two homotopies are chosen during normalization.
#[derive(Debug, Clone)]
pub(crate) enum Mode {
    /// Any vertex; a homotopy that raises the pf sequence either way is an error.
    Absolute,
    /// Only vertices whose two edges lie in one stratum of the maximal filtration,
    /// so that subdivision points made for EG-i and EG-ii survive.
    Relative,
    /// Any vertex, skipping those where both choices raise the pf sequence; then,
    /// while over the edge bound, homotopies that keep the pf sequence below the
    /// ceiling.
    Rebound(Option<PfSequence>),
}

/// Cleanup, invariant forest collapse, valence-one and valence-two homotopies to a
/// fixed point.
pub(crate) fn normalize_run(run: &mut Run, mode: &Mode) -> Result<(), TtError> {
    loop {
        run.cleanup()?;
        let s = invariant_forest(&run.cur);
        if !s.is_empty() {
            let r = collapse(&run.cur, &s)?;
            run.commit(r)?;
            continue;
        }
        let g = &run.cur.graph;
        if let Some(v) = g.vertex_ids().find(|&v| g.is_trivial(v) && g.valence(v) == 1) {
            let r = valence_one(&run.cur, v)?;
            run.commit(r)?;
            continue;
        }
        if valence_two_step(run, mode)? {
            continue;
        }
        if let Mode::Rebound(ceiling) = mode {
            if !within_edge_bound(&run.cur.graph) && forced_valence_two(run, ceiling.as_ref())? {
                continue;
            }
        }
        return Ok(());
    }
}

fn incident(g: &Graph, v: VertexId) -> Vec<EdgeId> {
    g.edge_ids().filter(|&e| g.edge(e).from == v || g.edge(e).to == v).collect()
}

fn valence_two_vertices(g: &Graph) -> Vec<(VertexId, [EdgeId; 2])> {
    g.vertex_ids()
        .filter(|&v| g.is_trivial(v) && g.valence(v) == 2)
        .filter_map(|v| match incident(g, v)[..] {
            [a, b] => Some((v, [a, b])),
            _ => None,
        })
        .collect()
}

/// Edge lengths from the left Perron eigenvector, so that `|f(e)| = λ|e|` on an irreducible block.
fn edge_lengths(f: &TopRep) -> Vec<f64> {
    let m = f.transition_matrix().rows;
    let n = m.len();
    let t: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect();
    pf_eigenvector(&t)
}

/// One valence-two homotopy at the first eligible vertex: collapse the longer
/// edge unless that increases the pf sequence, else the shorter one.
fn valence_two_step(run: &mut Run, mode: &Mode) -> Result<bool, TtError> {
    let g = &run.cur.graph;
    let height = matches!(mode, Mode::Relative).then(|| maximal_filtration(&run.cur).height(g.num_edges()));
    let candidates: Vec<_> = valence_two_vertices(g)
        .into_iter()
        .filter(|(_, [a, b])| height.as_ref().is_none_or(|h| h[a.0] == h[b.0]))
        .collect();
    if candidates.is_empty() {
        return Ok(false);
    }
    let w = edge_lengths(&run.cur);
    let before = run.trace.current_pf().clone();
    for (v, [a, b]) in candidates {
        let order = if w[b.0] > w[a.0] { [b, a] } else { [a, b] };
        for c in order {
            let r = valence_two(&run.cur, v, c)?;
            if pf_compare(&PfSequence::of(&r.rep), &before) != Ordering::Greater {
                run.commit(r)?;
                return Ok(true);
            }
        }
        if matches!(mode, Mode::Absolute) {
            return Err(TtError::ValenceTwoIncrease(run.cur.graph.vertices[v.0].name.clone()));
        }
    }
    Ok(false)
}

/// The valence-two homotopy with the smallest resulting pf sequence, provided it
/// stays below `ceiling`.
fn forced_valence_two(run: &mut Run, ceiling: Option<&PfSequence>) -> Result<bool, TtError> {
    let mut best: Option<(PfSequence, MoveReceipt)> = None;
    for (v, inc) in valence_two_vertices(&run.cur.graph) {
        for c in inc {
            let r = valence_two(&run.cur, v, c)?;
            let pf = PfSequence::of(&r.rep);
            if ceiling.is_some_and(|top| pf_compare(&pf, top) != Ordering::Less) {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _)| pf_compare(&pf, b) == Ordering::Less) {
                best = Some((pf, r));
            }
        }
    }
    match best {
        Some((_, r)) => {
            run.commit(r)?;
            Ok(true)
        }
        None => Ok(false),
    }
}

/// The smallest proper invariant subgraph that is not a collapsible forest,
/// ordered by edge count then smallest edge.
pub fn find_reduction(f: &TopRep) -> Option<Subgraph> {
    let g = &f.graph;
    let mut best: Option<BTreeSet<EdgeId>> = None;
    for e in g.edge_ids() {
        let c = f.orbit_closure(&BTreeSet::from([e]));
        if c.len() == g.num_edges() || g.is_collapsible_forest(&Subgraph { edges: c.clone() }) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (c.len(), c.first()) < (b.len(), b.first()),
        };
        if better {
            best = Some(c);
        }
    }
    best.map(|edges| Subgraph { edges })
}

#[derive(Debug, Clone)]
pub struct TtOutcome {
    pub rep: TopRep,
    pub trace: Trace,
    /// The normalized input, then the representative after each descent round.
    pub stages: Vec<TopRep>,
}

impl fmt::Display for TtOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} moves, {} rounds, pf {}", self.trace.steps.len(), self.stages.len() - 1, self.trace.current_pf())
    }
}

/// Improve an irreducible representative to a train track map.
///
/// Each round folds at the smallest illegal turn (by edge id, then position)
/// taken by an image, then cleans up and normalizes; λ must drop every round.
pub fn train_track_algorithm(f: &TopRep, budget: usize) -> Result<TtOutcome, TtError> {
    let mut run = Run::new(f, budget);
    normalize_run(&mut run, &Mode::Absolute)?;
    let mut stages = vec![run.cur.clone()];
    loop {
        let m = run.cur.transition_matrix();
        if m.size() == 0 {
            break;
        }
        if !m.is_irreducible() {
            let witness = find_reduction(&run.cur)
                .unwrap_or_else(|| Subgraph { edges: reducing_closure(&run.cur) })
                .names(&run.cur.graph);
            return Err(TtError::Reducible {
                witness,
                trace: Box::new(run.trace),
                rep: Box::new(run.cur),
            });
        }
        let lambda = PfSequence::of(&run.cur);
        if lambda.0.is_empty() {
            break;
        }
        let offenders = run.cur.train_track_offenders();
        let Some(off) = offenders.first() else { break };
        descend(&mut run, off.edge, off.position, &off.turn, false)?;
        stages.push(run.cur.clone());
    }
    Ok(TtOutcome { rep: run.cur, trace: run.trace, stages })
}

/// One EG descent round at the illegal turn `turn` taken by `f(e)` at slot
/// `position`, committed only if the pf data strictly decreases. The direct fold
/// round at `turn` comes first; the rest start from the subdivided point and
/// fold ever shorter segments, since full folds of loops can return to the same
/// graph with the same λ.
pub(crate) fn descend(run: &mut Run, e: EdgeId, position: usize, turn: &Turn, relative: bool) -> Result<(), TtError> {
    let mode = if relative { Mode::Rebound(Some(run.trace.current_pf().clone())) } else { Mode::Absolute };
    let mut failure = None;
    let attempts = [
        (false, FoldSpan::Maximal),
        (true, FoldSpan::Maximal),
        (true, FoldSpan::Shortest),
        (true, FoldSpan::Split),
        (false, FoldSpan::Split),
    ];
    for (subdivided, span) in attempts {
        let mut trial = run.clone();
        let token = trial.trace.open_round();
        let steps = if subdivided {
            descent_round(&trial.cur, e, position, span)
        } else {
            fold_round_span(&trial.cur, turn, span)
        };
        let steps = match steps {
            Ok(s) => s,
            Err(err) => {
                failure.get_or_insert(TtError::Move(err));
                continue;
            }
        };
        trial.commit_all(steps)?;
        normalize_run(&mut trial, &mode)?;
        trial.trace.close_round(RoundKind::Descent, token);
        let round = trial.trace.rounds.last().expect("just closed");
        if pf_compare(&round.after, &round.before) == Ordering::Less {
            *run = trial;
            return Ok(());
        }
        failure.get_or_insert(TtError::NoDescent {
            before: round.before.to_string(),
            after: round.after.to_string(),
            trace: Box::new(trial.trace.clone()),
        });
    }
    Err(failure.expect("at least one attempt"))
}

fn reducing_closure(f: &TopRep) -> BTreeSet<EdgeId> {
    f.graph
        .edge_ids()
        .map(|e| f.orbit_closure(&BTreeSet::from([e])))
        .filter(|c| c.len() < f.graph.num_edges())
        .min_by_key(|c| (c.len(), c.first().copied()))
        .unwrap_or_default()
}

/// Whether `b` is obtained from `a` by renaming vertices and edges, reversing
/// edges, and twisting edges at their endpoints. Vertex groups are matched by
/// their multiplication tables. Twists are searched exhaustively up to `max_twists`
/// combinations.
pub fn isomorphic_up_to_twist(a: &TopRep, b: &TopRep, max_twists: usize) -> bool {
    let (ga, gb) = (&a.graph, &b.graph);
    if ga.num_vertices() != gb.num_vertices() || ga.num_edges() != gb.num_edges() {
        return false;
    }
    let slots: Vec<(OEdge, usize)> = ga
        .edge_ids()
        .flat_map(|e| [OEdge::fwd(e), OEdge::fwd(e).rev()])
        .map(|o| (o, ga.group(ga.term(o)).order()))
        .filter(|&(_, k)| k > 1)
        .collect();
    let total = slots.iter().try_fold(1usize, |acc, &(_, k)| acc.checked_mul(k));
    let slots = match total {
        Some(t) if t <= max_twists => slots,
        _ => Vec::new(),
    };
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut cur = a.clone();
        cur.marking = None;
        let mut ok = true;
        for (&(o, _), &k) in slots.iter().zip(&choice) {
            if k > 0 {
                match twist(&cur, o, Elem(k as u32)) {
                    Ok(r) => cur = r.rep,
                    Err(_) => ok = false,
                }
            }
        }
        if ok && relabel_match(&cur, b) {
            return true;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == slots.len() {
                return false;
            }
            choice[i] += 1;
            if choice[i] < slots[i].1 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn same_table(x: &FiniteGroup, y: &FiniteGroup) -> bool {
    x.order() == y.order()
        && x.elements().all(|p| x.elements().all(|q| x.mul(p, q) == y.mul(p, q)))
}

/// Exact match under some relabeling and reorientation of edges.
fn relabel_match(a: &TopRep, b: &TopRep) -> bool {
    let (ga, gb) = (&a.graph, &b.graph);
    let n = ga.num_edges();
    let mut emap: Vec<Option<OEdge>> = vec![None; n];
    let mut vmap: Vec<Option<VertexId>> = vec![None; ga.num_vertices()];
    let mut used = vec![false; n];
    // isolated-vertex case: a single vertex and no edges
    if n == 0 {
        return same_table(ga.group(VertexId(0)), gb.group(VertexId(0)));
    }
    fn bind(vmap: &mut [Option<VertexId>], ga: &Graph, gb: &Graph, v: VertexId, w: VertexId) -> Option<bool> {
        match vmap[v.0] {
            Some(x) => (x == w).then_some(false),
            None => {
                if !same_table(ga.group(v), gb.group(w)) || vmap.contains(&Some(w)) {
                    return None;
                }
                vmap[v.0] = Some(w);
                Some(true)
            }
        }
    }
    fn search(
        i: usize,
        a: &TopRep,
        b: &TopRep,
        emap: &mut Vec<Option<OEdge>>,
        vmap: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let (ga, gb) = (&a.graph, &b.graph);
        if i == ga.num_edges() {
            return images_match(a, b, emap, vmap);
        }
        let e = ga.edge(EdgeId(i));
        for j in 0..gb.num_edges() {
            if used[j] {
                continue;
            }
            for rev in [false, true] {
                let o = OEdge::new(EdgeId(j), rev);
                let mut fresh = Vec::new();
                let ok = [(e.from, gb.origin(o)), (e.to, gb.term(o))].iter().all(|&(v, w)| {
                    match bind(vmap, ga, gb, v, w) {
                        None => false,
                        Some(new) => {
                            if new {
                                fresh.push(v);
                            }
                            true
                        }
                    }
                });
                if ok {
                    used[j] = true;
                    emap[i] = Some(o);
                    if search(i + 1, a, b, emap, vmap, used) {
                        return true;
                    }
                    used[j] = false;
                    emap[i] = None;
                }
                for v in fresh {
                    vmap[v.0] = None;
                }
            }
        }
        false
    }
    if !search(0, a, b, &mut emap, &mut vmap, &mut used) {
        return false;
    }
    true
}

fn images_match(a: &TopRep, b: &TopRep, emap: &[Option<OEdge>], vmap: &[Option<VertexId>]) -> bool {
    let (ga, gb) = (&a.graph, &b.graph);
    let vm = |v: VertexId| vmap[v.0].expect("vertex bound");
    for v in ga.vertex_ids() {
        if vm(a.map.vertex_map[v.0]) != b.map.vertex_map[vm(v).0]
            || a.map.vertex_homs[v.0].table() != b.map.vertex_homs[vm(v).0].table()
        {
            return false;
        }
    }
    let carry = |o: OEdge| {
        let m = emap[o.edge().0].expect("edge bound");
        if o.is_reversed() {
            m.rev()
        } else {
            m
        }
    };
    for e in ga.edge_ids() {
        let p = a.map.forward_image(e);
        let mut q = EdgePath::from_parts(vm(p.start()), p.elems().to_vec(), p.edges().iter().map(|&o| carry(o)).collect());
        let target = carry(OEdge::fwd(e));
        if target.is_reversed() {
            q = q.reverse(gb);
        }
        if &q != b.map.forward_image(target.edge()) {
            return false;
        }
    }
    true
}
