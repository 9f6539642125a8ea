mod common;

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use common::*;
use gog_core::format::parse_path_str;
use gog_core::gog::{
    cyclic_tighten, loops_conjugate, Edge, EdgePath, Graph, OEdge, PathBuilder, Subgraph, Vertex, VertexId,
};
use gog_core::groups::{Elem, FiniteGroup};
use gog_core::traintrack::build_thistle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn thistle_c2x4() -> Graph {
    build_thistle(&[c("A", 2, "a"), c("B", 2, "b"), c("C", 2, "c"), c("D", 2, "d")], 0).unwrap().0
}

/// The first graph reached from the thistle: `e'_4` joins `⟨d⟩` to `⟨b⟩`.
fn g1() -> Graph {
    let star = Arc::new(FiniteGroup::trivial("1"));
    let vertices = vec![
        Vertex { name: "*".into(), group: star },
        Vertex { name: "v1".into(), group: c("A", 2, "a") },
        Vertex { name: "v2".into(), group: c("B", 2, "b") },
        Vertex { name: "v3".into(), group: c("C", 2, "c") },
        Vertex { name: "v4".into(), group: c("D", 2, "d") },
    ];
    let e = |n: &str, a: usize, b: usize| Edge { name: n.into(), from: VertexId(a), to: VertexId(b) };
    Graph::new(vertices, vec![e("e1", 1, 0), e("e2", 2, 0), e("e3", 3, 0), e("e4'", 4, 2)]).unwrap()
}

fn p(g: &Graph, s: &str) -> EdgePath {
    parse_path_str(g, s).unwrap()
}

#[test]
fn reverse_of_a_prickle_word() {
    let g = thistle_c2x4();
    let w = p(&g, "e1 ~e4 d@v4 e4 ~e2 b@v2 e2 ~e3 c@v3 e3");
    let r = w.reverse(&g);
    assert_eq!(r.display(&g), "~e3 c@v3 e3 ~e2 b@v2 e2 ~e4 d@v4 e4 ~e1");
    assert_eq!(r.reverse(&g), w);
    let back = w.concat(&g, &r).unwrap().tighten(&g);
    assert!(back.is_trivial() && back.start() == w.start());
}

#[test]
fn reverse_of_an_element_inverts_it() {
    let g = build_thistle(&[c("A", 3, "a")], 0).unwrap().0;
    let x = EdgePath::element(VertexId(1), Elem(1));
    assert_eq!(x.reverse(&g), EdgePath::element(VertexId(1), Elem(2)));
}

#[test]
fn concat_multiplies_at_the_junction() {
    let g = thistle_c2x4();
    let a = p(&g, "e2 ~e2 b@v2");
    let b = p(&g, "b@v2 e2");
    assert_eq!(a.concat(&g, &b).unwrap().display(&g), "e2 ~e2 e2");
    assert!(p(&g, "e1").concat(&g, &p(&g, "e2")).is_err());
}

#[test]
fn tighten_removes_backtracking_through_the_identity() {
    let g1 = g1();
    let before = p(&g1, "e1 ~e2 ~e4' d@v4 e4' e2 ~e2 b@v2 e2 ~e3 c@v3");
    let after = p(&g1, "e1 ~e2 ~e4' d@v4 e4' b@v2 e2 ~e3 c@v3");
    assert!(!before.is_tight(&g1));
    assert_eq!(before.tighten(&g1), after);
    let g = thistle_c2x4();
    assert!(p(&g, "e2 ~e2").tighten(&g).is_trivial());
    let kept = p(&g, "~e2 b@v2 e2");
    assert_eq!(kept.tighten(&g), kept);
}

#[test]
fn cyclic_forms() {
    let g = thistle_c2x4();
    let l = p(&g, "~e1 a@v1 e1");
    assert_eq!(cyclic_tighten(&g, &l).unwrap(), EdgePath::element(VertexId(1), Elem(1)));
    let trivial = p(&g, "~e2 e2");
    assert!(cyclic_tighten(&g, &trivial).unwrap().is_trivial());
    assert!(cyclic_tighten(&g, &p(&g, "e1")).is_err());
}

#[test]
fn distinct_factors_are_not_conjugate() {
    let g = thistle_c2x4();
    let a = p(&g, "~e1 a@v1 e1");
    let b = p(&g, "~e2 b@v2 e2");
    assert!(!loops_conjugate(&g, &a, &b).unwrap());
    let w = p(&g, "~e3 c@v3 e3 ~e2 b@v2 e2");
    let conj = w.concat(&g, &a).unwrap().concat(&g, &w.reverse(&g)).unwrap();
    assert!(loops_conjugate(&g, &a, &conj).unwrap());
}

#[test]
fn graph_invariants_of_small_graphs() {
    let inv = thistle_c2x4().invariants();
    assert_eq!((inv.eta, inv.beta, inv.complexity, inv.edge_bound), (4, 0, 3, 5));
    let rose = build_thistle(&[], 2).unwrap().0.invariants();
    assert_eq!((rose.eta, rose.beta, rose.complexity, rose.edge_bound), (0, 2, 3, 3));
    let point = Graph::new(vec![Vertex { name: "v".into(), group: c("A", 5, "a") }], vec![]).unwrap().invariants();
    assert_eq!((point.eta, point.beta, point.complexity), (1, 0, 0));
}

#[test]
fn collapsible_forests_in_the_thistle() {
    let g = thistle_c2x4();
    let e = |i: usize| gog_core::gog::EdgeId(i);
    assert!(g.is_collapsible_forest(&Subgraph::new([e(0)])));
    assert!(!g.is_collapsible_forest(&Subgraph::new([e(0), e(1)])));
}

/// Every sequence of cancellations ends at the same path, and nothing shorter is reachable.
fn cancellation_normal_forms(g: &Graph, p: &EdgePath) -> BTreeSet<EdgePath> {
    let mut seen = BTreeSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    let mut terminal = BTreeSet::new();
    while let Some(q) = queue.pop_front() {
        let (es, xs) = (q.edges(), q.elems());
        let mut stuck = true;
        for i in 0..es.len().saturating_sub(1) {
            if es[i + 1] == es[i].rev() && xs[i + 1].is_id() {
                stuck = false;
                let v = g.origin(es[i]);
                let grp = g.group(v);
                let mut elems = xs[..i].to_vec();
                elems.push(grp.mul(xs[i], xs[i + 2]));
                elems.extend_from_slice(&xs[i + 3..]);
                let mut edges = es[..i].to_vec();
                edges.extend_from_slice(&es[i + 2..]);
                let r = EdgePath::from_parts(q.start(), elems, edges);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        if stuck {
            terminal.insert(q);
        }
    }
    terminal
}

/// Closed paths at `v` with at most `len` edges and every choice of elements, without `e·1·ē`.
fn tight_loops(g: &Graph, v: VertexId, len: usize) -> Vec<EdgePath> {
    let mut out = Vec::new();
    let mut frontier: Vec<EdgePath> = g.group(v).elements().map(|x| EdgePath::element(v, x)).collect();
    for _ in 0..=len {
        let mut next = Vec::new();
        for q in &frontier {
            if q.end(g) == v {
                out.push(q.clone());
            }
            if q.len() == len {
                continue;
            }
            let here = q.end(g);
            for o in g.oedges().filter(|&o| g.origin(o) == here) {
                if q.last_edge() == Some(o.rev()) && q.trail().is_id() {
                    continue;
                }
                for x in g.group(g.term(o)).elements() {
                    let mut b = PathBuilder::raw(g, q.start());
                    b.push_path(q);
                    b.push_edge(o);
                    b.push_elem(x);
                    next.push(b.finish());
                }
            }
        }
        frontier = next;
    }
    out
}

fn conjugate_by_search(g: &Graph, a: &EdgePath, b: &EdgePath, len: usize) -> bool {
    let target = b.tighten(g);
    tight_loops(g, a.start(), len).iter().any(|c| {
        let mut pb = PathBuilder::tight(g, c.start());
        pb.push_path(c);
        pb.push_path(a);
        pb.push_path(&c.reverse(g));
        pb.finish() == target
    })
}

fn random_loop(rng: &mut ChaCha8Rng, g: &Graph, v: VertexId, len: usize) -> EdgePath {
    loop {
        let q = random_path(rng, g, v, len);
        if q.end(g) == v {
            return q;
        }
    }
}

fn is_forest_by_rooting(g: &Graph, s: &Subgraph) -> bool {
    let mut left: BTreeSet<_> = s.edges.iter().copied().collect();
    while let Some(&e0) = left.iter().next() {
        // Grow the component of e0.
        let mut vs = BTreeSet::from([g.edge(e0).from, g.edge(e0).to]);
        let mut es = BTreeSet::new();
        loop {
            let add: Vec<_> = left
                .iter()
                .copied()
                .filter(|&e| vs.contains(&g.edge(e).from) || vs.contains(&g.edge(e).to))
                .collect();
            if add.is_empty() {
                break;
            }
            for e in add {
                left.remove(&e);
                es.insert(e);
                vs.insert(g.edge(e).from);
                vs.insert(g.edge(e).to);
            }
        }
        if es.len() + 1 != vs.len() {
            return false;
        }
        // Orient toward some root: every other vertex then injects its group into
        // a trivial edge group, which is onto only if the group is trivial.
        if !vs.iter().any(|&r| vs.iter().all(|&v| v == r || g.is_trivial(v))) {
            return false;
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tighten_is_the_unique_cancellation_normal_form(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3);
        let v = VertexId(rng.gen_range(0..g.num_vertices()));
        let q = random_path(&mut rng, &g, v, 4);
        let t = q.tighten(&g);
        prop_assert!(t.is_tight(&g));
        prop_assert_eq!(t.tighten(&g), t.clone());
        prop_assert_eq!(cancellation_normal_forms(&g, &q), BTreeSet::from([t.clone()]));
        prop_assert_eq!(q.reverse(&g).tighten(&g), t.reverse(&g));
    }

    #[test]
    fn path_times_reverse_is_trivial(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3);
        let q = random_path(&mut rng, &g, VertexId(0), 6);
        let r = q.concat(&g, &q.reverse(&g)).unwrap().tighten(&g);
        prop_assert!(r.is_trivial());
        prop_assert_eq!(r.start(), VertexId(0));
    }

    #[test]
    fn conjugated_loops_have_the_same_cyclic_form(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3);
        let l = random_loop(&mut rng, &g, VertexId(0), 5);
        let w = random_loop(&mut rng, &g, VertexId(0), 3);
        let conj = w.concat(&g, &l).unwrap().concat(&g, &w.reverse(&g)).unwrap();
        prop_assert!(loops_conjugate(&g, &l, &conj).unwrap());
        prop_assert_eq!(cyclic_tighten(&g, &l).unwrap(), cyclic_tighten(&g, &conj).unwrap());
        let c = cyclic_tighten(&g, &l).unwrap();
        prop_assert_eq!(cyclic_tighten(&g, &c).unwrap(), c);
    }

    #[test]
    fn conjugacy_agrees_with_bounded_search(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 2);
        let a = random_loop(&mut rng, &g, VertexId(0), 2).tighten(&g);
        let b = if rng.gen_bool(0.5) {
            random_loop(&mut rng, &g, VertexId(0), 2).tighten(&g)
        } else {
            let w = random_loop(&mut rng, &g, VertexId(0), 1);
            w.concat(&g, &a).unwrap().concat(&g, &w.reverse(&g)).unwrap().tighten(&g)
        };
        prop_assume!(a.len() <= 2 && b.len() <= 4);
        // Rotating a costs at most |a| edges, then half of b is the conjugating tail.
        let bound = a.len() + b.len() / 2 + 1;
        prop_assert_eq!(loops_conjugate(&g, &a, &b).unwrap(), conjugate_by_search(&g, &a, &b, bound));
    }

    #[test]
    fn conjugacy_is_an_equivalence(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3);
        let ls: Vec<EdgePath> = (0..5).map(|_| random_loop(&mut rng, &g, VertexId(0), 3)).collect();
        for a in &ls {
            prop_assert!(loops_conjugate(&g, a, a).unwrap());
            for b in &ls {
                let ab = loops_conjugate(&g, a, b).unwrap();
                prop_assert_eq!(ab, loops_conjugate(&g, b, a).unwrap());
                for c in &ls {
                    if ab && loops_conjugate(&g, b, c).unwrap() {
                        prop_assert!(loops_conjugate(&g, a, c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn collapsible_forests_match_rooted_orientations(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 3);
        let edges = g.edge_ids().filter(|_| rng.gen_bool(0.6));
        let s = Subgraph::new(edges);
        prop_assert_eq!(g.is_collapsible_forest(&s), is_forest_by_rooting(&g, &s));
    }
}

#[test]
fn oriented_edges_reverse_in_place() {
    let g = thistle_c2x4();
    for o in g.oedges() {
        assert_eq!(o.rev().rev(), o);
        assert_eq!(g.term(o.rev()), g.origin(o));
        assert_eq!(OEdge::new(o.edge(), o.is_reversed()), o);
    }
}
