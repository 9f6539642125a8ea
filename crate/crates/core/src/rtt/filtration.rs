use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::gog::{EdgeId, Graph};
use crate::rep::{TopRep, TransitionMatrix};
use crate::spectral::PfValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumKind {
    Zero,
    /// Non-exponentially growing: a permutation block.
    Neg,
    /// Exponentially growing: λ > 1.
    Eg,
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumKind::Zero => "zero",
            StratumKind::Neg => "NEG",
            StratumKind::Eg => "EG",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Stratum {
    pub edges: Vec<EdgeId>,
    pub kind: StratumKind,
    pub block: Vec<Vec<u64>>,
    pub lambda: Option<PfValue>,
}

/// Strata listed bottom-up: `H_1, …, H_m`, with `G_r = H_1 ∪ … ∪ H_r`.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub strata: Vec<Stratum>,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Edges of `G_r` (1-based `r`; `G_0 = ∅`).
    pub fn g(&self, r: usize) -> BTreeSet<EdgeId> {
        self.strata[..r].iter().flat_map(|s| s.edges.iter().copied()).collect()
    }

    /// Stratum index (0-based) of each edge.
    pub fn height(&self, num_edges: usize) -> Vec<usize> {
        let mut h = vec![usize::MAX; num_edges];
        for (r, s) in self.strata.iter().enumerate() {
            for &e in &s.edges {
                h[e.0] = r;
            }
        }
        h
    }

    pub fn eg_indices(&self) -> Vec<usize> {
        (0..self.strata.len()).filter(|&r| self.strata[r].kind == StratumKind::Eg).collect()
    }

    pub fn describe(&self, g: &Graph) -> String {
        self.strata
            .iter()
            .enumerate()
            .map(|(r, s)| {
                let names: Vec<&str> = s.edges.iter().map(|e| g.edge(*e).name.as_str()).collect();
                let lam = s.lambda.as_ref().map_or(String::new(), |l| format!(" lambda={}", l.to_decimal(12)));
                format!("H{} {} {{{}}}{}", r + 1, s.kind, names.join(","), lam)
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Strongly connected components of the transition digraph (edge `j → i` when
/// the image of `j` crosses `i`), ordered so every stratum maps into lower ones.
/// Incomparable components are ordered by their smallest edge.
pub fn maximal_filtration(f: &TopRep) -> Filtration {
    filtration_of_matrix(&f.transition_matrix())
}

pub fn filtration_of_matrix(m: &TransitionMatrix) -> Filtration {
    let n = m.size();
    let mut dg = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|i| dg.add_node(i)).collect();
    for i in 0..n {
        for j in 0..n {
            if m.rows[i][j] > 0 {
                dg.add_edge(nodes[j], nodes[i], ());
            }
        }
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&dg).into_iter().map(|c| {
        let mut v: Vec<usize> = c.into_iter().map(|x| dg[x]).collect();
        v.sort_unstable();
        v
    }).collect();
    comps.sort_by_key(|c| c[0]);
    let mut comp_of = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &i in c {
            comp_of[i] = k;
        }
    }
    // successors: components that a component's images cross
    let succ: Vec<BTreeSet<usize>> = comps
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.iter()
                .flat_map(|&j| (0..n).filter(move |&i| m.rows[i][j] > 0))
                .map(|i| comp_of[i])
                .filter(|&l| l != k)
                .collect()
        })
        .collect();
    let mut placed = vec![false; comps.len()];
    let mut strata = Vec::with_capacity(comps.len());
    while strata.len() < comps.len() {
        let k = (0..comps.len())
            .find(|&k| !placed[k] && succ[k].iter().all(|&l| placed[l]))
            .expect("condensation is acyclic");
        placed[k] = true;
        let edges: Vec<EdgeId> = comps[k].iter().map(|&i| EdgeId(i)).collect();
        let block = m.block(&edges);
        let (kind, lambda) = if edges.len() == 1 && block[0][0] == 0 {
            (StratumKind::Zero, None)
        } else {
            let l = PfValue::of_matrix(&block).expect("strongly connected block");
            if l.is_one() {
                (StratumKind::Neg, None)
            } else {
                (StratumKind::Eg, Some(l))
            }
        };
        strata.push(Stratum { edges, kind, block, lambda });
    }
    Filtration { strata }
}

/// The Perron–Frobenius eigenvalues of the EG strata, nonincreasing.
#[derive(Debug, Clone)]
pub struct PfSequence(pub Vec<PfValue>);

impl PfSequence {
    pub fn of(f: &TopRep) -> PfSequence {
        pf_sequence(&maximal_filtration(f))
    }

    /// Minimal polynomials, `;`-separated, in brackets.
    pub fn polys(&self) -> String {
        let ps: Vec<String> = self.0.iter().map(|l| l.minimal_polynomial().to_string()).collect();
        format!("[{}]", ps.join("; "))
    }
}

impl fmt::Display for PfSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.0.iter().map(|l| l.to_decimal(12)).collect();
        write!(f, "({})", vs.join(", "))
    }
}

pub fn pf_sequence(filt: &Filtration) -> PfSequence {
    let mut v: Vec<PfValue> = filt.strata.iter().filter_map(|s| s.lambda.clone()).collect();
    v.sort_by(|a, b| b.cmp_exact(a));
    PfSequence(v)
}

/// Lexicographic order with exact eigenvalue comparisons; a proper prefix is smaller.
pub fn pf_compare(a: &PfSequence, b: &PfSequence) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp_exact(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.0.len().cmp(&b.0.len())
}
