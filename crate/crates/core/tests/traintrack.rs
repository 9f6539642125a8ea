mod common;

use common::*;
use gog_core::rep::{verify_outer_class, TopRep};
use gog_core::spectral::{IntPoly, PfValue};
use gog_core::traintrack::*;

fn minpoly(f: &TopRep) -> IntPoly {
    f.pf().unwrap().minimal_polynomial()
}

#[test]
fn thistle_shape() {
    let (g, m) = build_thistle(&[c("A", 2, "a"), c("B", 3, "b")], 2).unwrap();
    assert_eq!(g.num_vertices(), 3);
    assert_eq!(g.num_edges(), 4);
    let inv = g.invariants();
    assert_eq!((inv.eta, inv.beta), (2, 2));
    assert!(m.validate(&g).is_ok());
    assert!(matches!(build_thistle(&[], 0), Err(TtError::EmptySignature)));
}

#[test]
fn example_one_representative() {
    let f = example1_rep();
    assert_eq!(f.transition_matrix().rows, vec![vec![0, 0, 0, 1], vec![1, 0, 0, 2], vec![0, 1, 0, 2], vec![0, 0, 1, 2]]);
    assert!(f.transition_matrix().is_irreducible());
    assert!(!f.is_train_track());
    assert_eq!(minpoly(&f), IntPoly::from_i64(&[-1, -2, -2, -2, 1]));
}

#[test]
fn malformed_automorphisms_are_rejected() {
    let mut phi = example1_input();
    phi.factor_images[0] = vec![vec![Letter::Elem { factor: 1, elem: gog_core::groups::Elem(1) }; 2]];
    assert!(rep_from_automorphism(&phi).is_err());
}

#[test]
fn example_one_reaches_the_twisted_train_track() {
    let f = example1_rep();
    let out = train_track_algorithm(&f, DEFAULT_BUDGET).unwrap();
    assert!(out.trace.steps.len() <= 50, "{}", out.trace.steps.len());
    assert!(out.rep.is_train_track());
    assert!(isomorphic_up_to_twist(&out.rep, &fixture_rep("f2.gog"), 1 << 12));
    assert_eq!(verify_outer_class(&f, &out.rep), Ok(true));
    assert!(out.trace.is_nonincreasing() && out.trace.descent_rounds_strict());
    assert!(out.trace.audit_failures().is_empty());
}

/// The middle stage equals the matrix read off the first fold by hand:
/// e₁ ↦ e₂, e₂ ↦ e₃, e₃ ↦ e₄′e₂, e₄′ ↦ e₁ē₂ē₄′de₄′be₂ē₃c.
#[test]
fn stage_polynomials() {
    let out = train_track_algorithm(&example1_rep(), DEFAULT_BUDGET).unwrap();
    let polys: Vec<IntPoly> = out.stages.iter().map(minpoly).collect();
    let by_hand = PfValue::of_matrix(&[vec![0, 0, 0, 1], vec![1, 0, 1, 2], vec![0, 1, 0, 1], vec![0, 0, 1, 2]]).unwrap();
    assert_eq!(polys.len(), 3);
    assert_eq!(polys[0], IntPoly::from_i64(&[-1, -2, -2, -2, 1]));
    assert_eq!(polys[1], by_hand.minimal_polynomial());
    assert_eq!(polys[1], IntPoly::from_i64(&[-1, 1, -3, 1]));
    assert_eq!(polys[2], IntPoly::from_i64(&[-1, 2, -2, -2, 1]));
}

#[test]
fn unique_illegal_turn_of_the_result() {
    let f = fixture_rep("f2.gog");
    assert!(f.is_train_track());
    let star = f.graph.vertex_by_name("*").unwrap();
    let mut legal = f.legality();
    let illegal: Vec<String> = f
        .graph
        .vertex_ids()
        .flat_map(|v| gog_core::rep::turns_at(&f.graph, v))
        .filter(|t| !t.is_degenerate() && !legal.is_legal(t))
        .map(|t| {
            assert_eq!(t.vertex(&f.graph), star);
            let mut names = [f.graph.edge(t.a.edge.edge()).name.clone(), f.graph.edge(t.b.edge.edge()).name.clone()];
            names.sort();
            names.join(",")
        })
        .collect();
    assert_eq!(illegal, ["e1,e3"]);
    for e in f.graph.edge_ids() {
        assert!(f.turns_taken(f.map.forward_image(e)).iter().all(|t| legal.is_legal(t)));
    }
}

#[test]
fn reducible_input_names_its_invariant_subgraph() {
    let f = fixture_rep("reducible.gog");
    assert!(!f.transition_matrix().is_irreducible());
    assert_eq!(find_reduction(&f).unwrap().names(&f.graph), ["e1", "e2"]);
    match train_track_algorithm(&f, DEFAULT_BUDGET) {
        Err(TtError::Reducible { witness, .. }) => assert_eq!(witness, ["e1", "e2"]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn budget_is_enforced() {
    match train_track_algorithm(&example1_rep(), 1) {
        Err(TtError::BudgetExceeded { budget: 1, trace, .. }) => assert!(trace.steps.len() <= 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn train_tracks_are_fixed_points() {
    let f = fixture_rep("f2.gog");
    let out = train_track_algorithm(&f, DEFAULT_BUDGET).unwrap();
    assert!(out.trace.steps.iter().all(|s| s.kind.name() != "fold"));
    assert_eq!(minpoly(&out.rep), minpoly(&f));
}
