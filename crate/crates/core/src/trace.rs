//! Move traces shared by the train track and relative train track pipelines.

use std::cmp::Ordering;

use crate::moves::{MoveKind, MoveReceipt};
use crate::rep::TopRep;
use crate::rtt::{pf_compare, PfSequence};

#[derive(Debug, Clone)]
pub struct TraceStep {
    pub step: usize,
    pub kind: MoveKind,
    /// pf sequence after the move.
    pub pf: PfSequence,
    pub matrix: Vec<Vec<u64>>,
    /// Failed receipt checks, empty when the move behaved.
    pub audit: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundKind {
    /// Fold descent at an illegal turn (EG-iii repair in the relative pipeline).
    Descent,
    CoreSubdivision,
    ConnectingPath,
    Normalize,
}

#[derive(Debug, Clone)]
pub struct Round {
    pub kind: RoundKind,
    /// Steps `first..last` belong to the round.
    pub first: usize,
    pub last: usize,
    pub before: PfSequence,
    pub after: PfSequence,
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub initial_pf: PfSequence,
    pub steps: Vec<TraceStep>,
    pub rounds: Vec<Round>,
}

impl Trace {
    pub fn new(f: &TopRep) -> Trace {
        Trace { initial_pf: PfSequence::of(f), steps: Vec::new(), rounds: Vec::new() }
    }

    pub fn current_pf(&self) -> &PfSequence {
        self.steps.last().map_or(&self.initial_pf, |s| &s.pf)
    }

    /// Record a committed move, auditing it against the representative it was applied to.
    pub fn record(&mut self, old: &TopRep, r: &MoveReceipt) {
        let pf = PfSequence::of(&r.rep);
        let audit = audit(old, r, self.current_pf(), &pf);
        self.steps.push(TraceStep {
            step: self.steps.len() + 1,
            kind: r.kind.clone(),
            pf,
            matrix: r.rep.transition_matrix().rows,
            audit,
        });
    }

    pub fn open_round(&self) -> (usize, PfSequence) {
        (self.steps.len(), self.current_pf().clone())
    }

    pub fn close_round(&mut self, kind: RoundKind, (first, before): (usize, PfSequence)) {
        let after = self.current_pf().clone();
        self.rounds.push(Round { kind, first, last: self.steps.len(), before, after });
    }

    /// Every step's pf sequence is at most its predecessor's.
    pub fn is_nonincreasing(&self) -> bool {
        let mut prev = &self.initial_pf;
        for s in &self.steps {
            if pf_compare(&s.pf, prev) == Ordering::Greater {
                return false;
            }
            prev = &s.pf;
        }
        true
    }

    /// Every descent round strictly decreased the pf sequence.
    pub fn descent_rounds_strict(&self) -> bool {
        self.rounds
            .iter()
            .filter(|r| r.kind == RoundKind::Descent)
            .all(|r| pf_compare(&r.after, &r.before) == Ordering::Less)
    }

    pub fn audit_failures(&self) -> Vec<String> {
        self.steps.iter().flat_map(|s| s.audit.iter().map(move |a| format!("step {}: {a}", s.step))).collect()
    }

    /// `<step#> <move> <params> pf=<polys>`, one line per step; with `verbose`
    /// each line is followed by the transition matrix.
    pub fn lines(&self, verbose: bool) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.steps {
            out.push(format!("{} {} pf={}", s.step, s.kind, s.pf.polys()));
            if verbose {
                for row in &s.matrix {
                    let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    out.push(format!("    [{}]", r.join(" ")));
                }
            }
        }
        out
    }
}

/// Checks every move must pass: η, β and complexity unchanged; subdivision keeps
/// the pf sequence; collapse deletes exactly the collapsed rows and columns.
pub fn audit(old: &TopRep, r: &MoveReceipt, pf_before: &PfSequence, pf_after: &PfSequence) -> Vec<String> {
    let mut out = Vec::new();
    if !r.invariants_preserved() {
        out.push(format!("{}: graph invariants changed", r.kind));
    }
    match &r.kind {
        MoveKind::Subdivide { .. } | MoveKind::CoreSubdivide { .. } => {
            if pf_compare(pf_before, pf_after) != Ordering::Equal {
                out.push(format!("{}: pf changed from {pf_before} to {pf_after}", r.kind));
            }
        }
        MoveKind::Collapse { edges } => {
            let m = old.transition_matrix().rows;
            let keep: Vec<usize> =
                old.graph.edge_ids().filter(|e| !edges.contains(&old.graph.edge(*e).name)).map(|e| e.0).collect();
            let expect: Vec<Vec<u64>> = keep.iter().map(|&i| keep.iter().map(|&j| m[i][j]).collect()).collect();
            if expect != r.rep.transition_matrix().rows {
                out.push(format!("{}: matrix is not the deletion of the collapsed rows and columns", r.kind));
            }
        }
        _ => {}
    }
    out
}
