#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use gog_core::gog::{Edge, EdgePath, Graph, OEdge, PathBuilder, Vertex, VertexId};
use gog_core::groups::{Elem, FiniteGroup};
use gog_core::rep::TopRep;
use gog_core::traintrack::{rep_from_automorphism, AutomorphismInput, Letter};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_rep(name: &str) -> TopRep {
    gog_core::format::parse_file(&fixture(name)).unwrap().rep().unwrap()
}

pub fn c(name: &str, n: u32, gen: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(name, n, gen).unwrap())
}

fn gen(i: usize) -> Letter {
    Letter::Elem { factor: i, elem: Elem(1) }
}

/// a ↦ b, b ↦ c, c ↦ d, d ↦ cbdadbc on C₂ * C₂ * C₂ * C₂.
pub fn example1_input() -> AutomorphismInput {
    let factors = vec![c("A", 2, "a"), c("B", 2, "b"), c("C", 2, "c"), c("D", 2, "d")];
    AutomorphismInput {
        factors,
        rank: 0,
        factor_images: vec![
            vec![vec![gen(1)]],
            vec![vec![gen(2)]],
            vec![vec![gen(3)]],
            vec![vec![gen(2), gen(1), gen(3), gen(0), gen(3), gen(1), gen(2)]],
        ],
        free_images: vec![],
    }
}

pub fn example1_rep() -> TopRep {
    rep_from_automorphism(&example1_input()).unwrap()
}

pub type Word = Vec<Letter>;

/// Free reduction with multiplication inside factors.
pub fn reduce(factors: &[Arc<FiniteGroup>], w: &[Letter]) -> Word {
    let mut out: Word = Vec::new();
    for &l in w {
        match (out.last().copied(), l) {
            (Some(Letter::Elem { factor: i, elem: x }), Letter::Elem { factor: j, elem: y }) if i == j => {
                out.pop();
                let z = factors[i].mul(x, y);
                if !z.is_id() {
                    out.push(Letter::Elem { factor: i, elem: z });
                }
            }
            (Some(Letter::Free { index: i, inverse: a }), Letter::Free { index: j, inverse: b }) if i == j && a != b => {
                out.pop();
            }
            (_, Letter::Elem { elem, .. }) if elem.is_id() => {}
            _ => out.push(l),
        }
    }
    out
}

pub fn inverse_word(factors: &[Arc<FiniteGroup>], w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse(factors)).collect()
}

/// Image of a word under `phi`; factors must be cyclic.
pub fn apply(phi: &AutomorphismInput, w: &[Letter]) -> Word {
    let mut out = Vec::new();
    for &l in w {
        match l {
            Letter::Elem { factor, elem } => {
                for _ in 0..elem.0 {
                    out.extend(phi.factor_images[factor][0].iter().copied());
                }
            }
            Letter::Free { index, inverse } => {
                let img = &phi.free_images[index];
                if inverse {
                    out.extend(inverse_word(&phi.factors, img));
                } else {
                    out.extend(img.iter().copied());
                }
            }
        }
    }
    reduce(&phi.factors, &out)
}

/// `phi ∘ psi`.
pub fn compose(phi: &AutomorphismInput, psi: &AutomorphismInput) -> AutomorphismInput {
    AutomorphismInput {
        factors: phi.factors.clone(),
        rank: phi.rank,
        factor_images: psi.factor_images.iter().map(|gs| gs.iter().map(|w| apply(phi, w)).collect()).collect(),
        free_images: psi.free_images.iter().map(|w| apply(phi, w)).collect(),
    }
}

/// A random elementary automorphism of `A_1 * … * A_n * F_k` with cyclic factors:
/// factor inversion or swap, partial conjugation of a factor, or a Nielsen move
/// on a free letter (inversion, swap, multiplication by a free letter or a factor element).
pub fn random_elementary<R: Rng>(rng: &mut R, factors: &[Arc<FiniteGroup>], rank: usize) -> AutomorphismInput {
    let n = factors.len();
    let mut phi = AutomorphismInput::identity(factors.to_vec(), rank);
    let order = |i: usize| factors[i].order() as u32;
    let free = |j: usize, inverse: bool| Letter::Free { index: j, inverse };
    let elem = |i: usize, k: u32| Letter::Elem { factor: i, elem: Elem(k) };
    loop {
        match rng.gen_range(0..8) {
            0 if n > 0 => {
                let i = rng.gen_range(0..n);
                if order(i) > 2 {
                    phi.factor_images[i][0] = vec![elem(i, order(i) - 1)];
                    return phi;
                }
            }
            1 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j && order(i) == order(j) {
                    phi.factor_images[i][0] = vec![elem(j, 1)];
                    phi.factor_images[j][0] = vec![elem(i, 1)];
                    return phi;
                }
            }
            2 if n > 0 && rank > 0 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..rank));
                phi.factor_images[i][0] = vec![free(j, false), elem(i, 1), free(j, true)];
                return phi;
            }
            3 if n > 1 => {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j {
                    let k = rng.gen_range(1..order(j));
                    phi.factor_images[i][0] = vec![elem(j, k), elem(i, 1), elem(j, order(j) - k)];
                    return phi;
                }
            }
            4 if rank > 0 => {
                let j = rng.gen_range(0..rank);
                phi.free_images[j] = vec![free(j, true)];
                return phi;
            }
            5 if rank > 1 => {
                let (j, l) = (rng.gen_range(0..rank), rng.gen_range(0..rank));
                if j != l {
                    let inv = rng.gen_bool(0.5);
                    phi.free_images[j] =
                        if rng.gen_bool(0.5) { vec![free(j, false), free(l, inv)] } else { vec![free(l, inv), free(j, false)] };
                    return phi;
                }
            }
            6 if rank > 0 && n > 0 => {
                let (j, i) = (rng.gen_range(0..rank), rng.gen_range(0..n));
                let k = rng.gen_range(1..order(i));
                phi.free_images[j] =
                    if rng.gen_bool(0.5) { vec![free(j, false), elem(i, k)] } else { vec![elem(i, k), free(j, false)] };
                return phi;
            }
            7 if rank > 1 => {
                let (j, l) = (rng.gen_range(0..rank), rng.gen_range(0..rank));
                if j != l {
                    phi.free_images.swap(j, l);
                    return phi;
                }
            }
            _ => {}
        }
    }
}

/// A product of between one and `max_len` random elementary automorphisms.
pub fn random_automorphism<R: Rng>(
    rng: &mut R,
    factors: &[Arc<FiniteGroup>],
    rank: usize,
    max_len: usize,
) -> AutomorphismInput {
    let len = rng.gen_range(1..=max_len);
    let mut phi = AutomorphismInput::identity(factors.to_vec(), rank);
    for _ in 0..len {
        phi = compose(&random_elementary(rng, factors, rank), &phi);
    }
    phi
}

/// A connected graph with at most three vertices and `1..=max_edges` edges;
/// vertex groups are cyclic of order at most 3.
pub fn random_graph<R: Rng>(rng: &mut R, max_edges: usize) -> Graph {
    let m = rng.gen_range(1..=max_edges);
    let n = rng.gen_range(1..=3.min(m + 1));
    let groups = [c("T", 1, "t"), c("A", 2, "a"), c("B", 3, "b")];
    let vertices: Vec<Vertex> =
        (0..n).map(|i| Vertex { name: format!("v{i}"), group: groups[rng.gen_range(0..3)].clone() }).collect();
    let mut edges = Vec::new();
    for i in 0..m {
        let (from, to) = if i + 1 < n {
            (VertexId(i + 1), VertexId(rng.gen_range(0..=i)))
        } else {
            (VertexId(rng.gen_range(0..n)), VertexId(rng.gen_range(0..n)))
        };
        let (from, to) = if rng.gen_bool(0.5) { (from, to) } else { (to, from) };
        edges.push(Edge { name: format!("e{i}"), from, to });
    }
    Graph::new(vertices, edges).unwrap()
}

/// A random, usually untight, path with at most `len` edges and random elements.
pub fn random_path<R: Rng>(rng: &mut R, g: &Graph, start: VertexId, len: usize) -> EdgePath {
    let mut b = PathBuilder::raw(g, start);
    let elem = |rng: &mut R, v: VertexId| Elem(rng.gen_range(0..g.group(v).order() as u32));
    let x = elem(rng, start);
    b.push_elem(x);
    for _ in 0..rng.gen_range(0..=len) {
        let star: Vec<OEdge> = g.oedges().filter(|&o| g.origin(o) == b.current()).collect();
        let o = star[rng.gen_range(0..star.len())];
        b.push_edge(o);
        // Favor the identity so that cancellations actually occur.
        if rng.gen_bool(0.5) {
            let x = elem(rng, b.current());
            b.push_elem(x);
        }
    }
    b.finish()
}

/// Irreducible by construction: a random matrix plus a random cyclic permutation.
pub fn random_irreducible<R: Rng>(rng: &mut R) -> Vec<Vec<u64>> {
    let n = rng.gen_range(1..=6);
    let density = rng.gen_range(0.0..0.6);
    let mut m: Vec<Vec<u64>> =
        (0..n).map(|_| (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..=3) } else { 0 }).collect()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for k in 0..n {
        m[order[k]][order[(k + 1) % n]] += 1;
    }
    m
}

/// Collatz–Wielandt bracket from power iteration on `M + I`: for a positive
/// vector v, min (Mv)_i / v_i ≤ λ ≤ max (Mv)_i / v_i.
pub fn power_iteration(m: &[Vec<u64>]) -> (f64, f64) {
    let n = m.len();
    let mul = |v: &[f64]| -> Vec<f64> { (0..n).map(|i| (0..n).map(|j| m[i][j] as f64 * v[j]).sum()).collect() };
    let mut v = vec![1.0; n];
    let mut bracket: (f64, f64) = (0.0, f64::INFINITY);
    for _ in 0..200_000 {
        let mv = mul(&v);
        let ratios = mv.iter().zip(&v).map(|(a, b)| a / b);
        let lo = ratios.clone().fold(f64::INFINITY, f64::min);
        let hi = ratios.fold(0.0, f64::max);
        bracket = (bracket.0.max(lo), bracket.1.min(hi));
        if bracket.1 - bracket.0 < 1e-11 {
            break;
        }
        let w: Vec<f64> = v.iter().zip(&mv).map(|(a, b)| a + b).collect();
        let s: f64 = w.iter().sum();
        v = w.iter().map(|x| x / s).collect();
    }
    bracket
}
