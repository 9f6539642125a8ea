//! Acceptance criteria, one line each: `PASS|FAIL <n> <name> (<time>): <detail>`.
//!
//! Criteria in `KNOWN_FAILURES` are expected to fail and are reported as such;
//! the run exits nonzero on any other failure, or when a known failure passes.

mod common;

use std::cmp::Ordering;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use gog_core::format::{parse, parse_file};
use gog_core::moves::{collapse, invariant_forest, subdivide};
use gog_core::rep::{turns_at, verify_outer_class, TopRep};
use gog_core::rtt::{
    check_rtt, maximal_filtration, relative_train_track_algorithm, Filtration, RttOutcome, Stratum, StratumKind,
    Witness,
};
use gog_core::spectral::{row_sums, IntPoly, PfValue};
use gog_core::trace::Trace;
use gog_core::traintrack::{isomorphic_up_to_twist, train_track_algorithm, TtError, TtOutcome, DEFAULT_BUDGET};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The middle polynomial of criterion 2 is not the one the first fold produces:
/// the map reached there has matrix rows [0 0 0 1] [1 0 1 2] [0 1 0 1] [0 0 1 2],
/// whose eigenvalue has minimal polynomial x^3 - 3x^2 + x - 1 (λ ≈ 2.769).
const KNOWN_FAILURES: &[usize] = &[2];

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, t: Instant) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e <= limit, || format!("took {e:.2?}, limit {limit:?}"))
}

fn poly(cs: &[i64]) -> IntPoly {
    IntPoly::from_i64(cs)
}

fn c1() -> Check {
    let t = Instant::now();
    let f = example1_rep();
    let m = f.transition_matrix().rows;
    within(Duration::from_millis(100), t)?;
    let want = vec![vec![0, 0, 0, 1], vec![1, 0, 0, 2], vec![0, 1, 0, 2], vec![0, 0, 1, 2]];
    ensure(m == want, || format!("matrix {m:?}"))?;
    Ok(format!("{m:?}"))
}

fn c2() -> Check {
    let t = Instant::now();
    let out = train_track_algorithm(&example1_rep(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), t)?;
    let want = [
        (poly(&[-1, -2, -2, -2, 1]), 2.948),
        (poly(&[-1, 1, -2, -2, 1]), 2.663),
        (poly(&[-1, 2, -2, -2, 1]), 2.539),
    ];
    let got: Vec<PfValue> = out.stages.iter().map(|f| f.pf()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let show = |l: &PfValue| format!("{} ≈ {:.3}", l.minimal_polynomial(), l.value());
    let shown: Vec<String> = got.iter().map(show).collect();
    ensure(got.len() == want.len(), || format!("{} stages: {}", got.len(), shown.join(", ")))?;
    for (i, (l, (p, approx))) in got.iter().zip(&want).enumerate() {
        let ok = l.minimal_polynomial() == *p && (l.value() - approx).abs() < 5e-4;
        ensure(ok, || format!("stage {i}: expected {p} ≈ {approx}, got {}", show(l)))?;
    }
    Ok(shown.join(", "))
}

fn c3() -> Check {
    let t = Instant::now();
    let out = train_track_algorithm(&example1_rep(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let f2 = parse_file(&fixture("f2.gog")).map_err(|e| e.to_string())?.rep().map_err(|e| e.to_string())?;
    let iso = isomorphic_up_to_twist(&out.rep, &f2, 1 << 12);
    let g = &out.rep.graph;
    let mut legal = out.rep.legality();
    let illegal: Vec<String> = g
        .vertex_ids()
        .flat_map(|v| turns_at(g, v))
        .filter(|t| !t.is_degenerate() && !legal.is_legal(t))
        .map(|t| {
            let mut names = [g.edge(t.a.edge.edge()).name.clone(), g.edge(t.b.edge.edge()).name.clone()];
            names.sort();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let taken = g.edge_ids().any(|e| out.rep.turns_taken(out.rep.map.forward_image(e)).iter().any(|t| !legal.is_legal(t)));
    within(Duration::from_secs(1), t)?;
    let moves = out.trace.steps.len();
    ensure(moves <= 50, || format!("{moves} moves"))?;
    ensure(iso, || "result is not isomorphic to the expected map up to twists".into())?;
    ensure(illegal == ["{e1,e3}"], || format!("illegal turns {illegal:?}"))?;
    ensure(!taken, || "an image takes an illegal turn".into())?;
    Ok(format!("{moves} moves, illegal turn {}", illegal[0]))
}

/// Pipeline runs shared by criteria 4, 5, 6 and 8.
struct Runs {
    tt: Vec<(TopRep, TtOutcome)>,
    rtt: Vec<(TopRep, RttOutcome)>,
    reducible: usize,
    elapsed: Duration,
}

impl Runs {
    fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.tt.iter().map(|(_, o)| &o.trace).chain(self.rtt.iter().map(|(_, o)| &o.trace))
    }
}

fn run_pipelines() -> Result<Runs, String> {
    let t = Instant::now();
    let mut inputs = vec![example1_rep()];
    for (seed, factors, rank) in [(11, vec![c("A", 2, "a"), c("B", 2, "b")], 2), (12, vec![c("A", 3, "a"), c("B", 2, "b")], 1)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..25 {
            let phi = random_automorphism(&mut rng, &factors, rank, 8);
            inputs.push(gog_core::traintrack::rep_from_automorphism(&phi).map_err(|e| e.to_string())?);
        }
    }
    let mut runs = Runs { tt: Vec::new(), rtt: Vec::new(), reducible: 0, elapsed: Duration::ZERO };
    for (i, f) in inputs.into_iter().enumerate() {
        match train_track_algorithm(&f, 10_000) {
            Ok(o) => runs.tt.push((f.clone(), o)),
            Err(TtError::Reducible { .. }) => runs.reducible += 1,
            Err(e) => return Err(format!("input {i}: tt: {e}")),
        }
        let o = relative_train_track_algorithm(&f, 10_000).map_err(|e| format!("input {i}: rtt: {e}"))?;
        runs.rtt.push((f, o));
    }
    runs.elapsed = t.elapsed();
    Ok(runs)
}

fn c4(runs: &Runs) -> Check {
    ensure(runs.elapsed <= Duration::from_secs(30), || format!("took {:.2?}", runs.elapsed))?;
    let pairs = runs.tt.iter().map(|(f, o)| (f, &o.rep)).chain(runs.rtt.iter().map(|(f, o)| (f, &o.rep)));
    for (i, (f, g)) in pairs.enumerate() {
        ensure(verify_outer_class(f, g) == Ok(true), || format!("run {i}: outer class changed"))?;
    }
    Ok(format!(
        "{} inputs, {} tt ({} reducible), {} rtt, {:.2?}",
        runs.rtt.len(),
        runs.tt.len(),
        runs.reducible,
        runs.rtt.len(),
        runs.elapsed
    ))
}

fn c5(runs: &Runs) -> Check {
    let mut rounds = 0;
    for (i, tr) in runs.traces().enumerate() {
        ensure(tr.is_nonincreasing(), || format!("trace {i}: pf increased"))?;
        ensure(tr.descent_rounds_strict(), || format!("trace {i}: a descent round did not decrease pf"))?;
        rounds += tr.rounds.iter().filter(|r| r.kind == gog_core::trace::RoundKind::Descent).count();
    }
    Ok(format!("{} traces, {rounds} strict descent rounds", runs.traces().count()))
}

fn c6(runs: &Runs) -> Check {
    let t = Instant::now();
    for (i, (_, o)) in runs.rtt.iter().enumerate() {
        ensure(check_rtt(&o.rep, &maximal_filtration(&o.rep)).passes(), || format!("rtt output {i} fails the checker"))?;
    }
    for (i, (_, o)) in runs.tt.iter().enumerate() {
        ensure(check_rtt(&o.rep, &maximal_filtration(&o.rep)).passes(), || format!("tt output {i} fails the checker"))?;
    }
    let load = |name: &str| -> Result<TopRep, String> {
        parse_file(&fixture(name)).map_err(|e| e.to_string())?.rep().map_err(|e| e.to_string())
    };
    let mut found = Vec::new();

    let f = load("eg_i.gog")?;
    let r = check_rtt(&f, &maximal_filtration(&f));
    ensure(r.strata.iter().any(|s| matches!(s.eg_i, Err(Witness::Direction { .. }))), || "no EG-i witness".into())?;
    found.push("EG-i");

    let f = load("eg_ii.gog")?;
    let r = check_rtt(&f, &maximal_filtration(&f));
    ensure(r.strata.iter().any(|s| matches!(s.eg_ii, Err(Witness::ConnectingPath(_)))), || "no EG-ii witness".into())?;
    found.push("EG-ii");

    let f = example1_rep();
    let r = check_rtt(&f, &maximal_filtration(&f));
    ensure(r.strata.iter().any(|s| matches!(s.eg_iii, Err(Witness::IllegalTurn { .. }))), || "no EG-iii witness".into())?;
    found.push("EG-iii");

    let f = load("eg_i.gog")?;
    let edges: Vec<_> = f.graph.edge_ids().collect();
    let block = f.transition_matrix().block(&edges);
    let merged = Filtration { strata: vec![Stratum { edges, kind: StratumKind::Eg, block, lambda: None }] };
    let r = check_rtt(&f, &merged);
    ensure(r.structure.iter().any(|w| matches!(w, Witness::Filtration { .. })), || "no filtration witness".into())?;
    found.push("filtration");

    let text = std::fs::read_to_string(fixture("f2.gog")).map_err(|e| e.to_string())?;
    let f = parse(&text.replace("edgemap e1 -> e2", "edgemap e1 -> e2 ~e2 e2"), Path::new("."))
        .map_err(|e| e.to_string())?
        .rep_unchecked();
    let r = check_rtt(&f, &maximal_filtration(&f));
    ensure(r.structure.iter().any(|w| matches!(w, Witness::Image { .. })), || "no image witness".into())?;
    found.push("untight");

    within(Duration::from_secs(5), t)?;
    Ok(format!("{} outputs pass; witnesses for {}", runs.rtt.len() + runs.tt.len(), found.join(", ")))
}

fn c7() -> Check {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let m = random_irreducible(&mut rng);
        let l = PfValue::of_matrix(&m).map_err(|e| format!("matrix {i}: {e}"))?.value();
        let sums = row_sums(&m);
        let (lo, hi) = (*sums.iter().min().unwrap() as f64, *sums.iter().max().unwrap() as f64);
        ensure(lo <= l + 1e-12 && l <= hi + 1e-12, || format!("matrix {i}: λ = {l} outside [{lo}, {hi}]"))?;
        let (a, b) = power_iteration(&m);
        let err = (l - (a + b) / 2.0).abs();
        ensure(b - a < 1e-10 && err < 1e-9, || format!("matrix {i}: λ = {l}, oracle {a}..{b}"))?;
        worst = worst.max(err);
    }
    within(Duration::from_secs(5), t)?;
    Ok(format!("200 matrices, max deviation {worst:.1e}"))
}

fn c8(runs: &Runs) -> Check {
    let mut steps = 0;
    for (i, tr) in runs.traces().enumerate() {
        let bad = tr.audit_failures();
        ensure(bad.is_empty(), || format!("trace {i}: {}", bad.join("; ")))?;
        steps += tr.steps.len();
    }
    let f = example1_rep();
    let e4 = f.graph.edge_by_name("e4").unwrap();
    let lambda = f.pf().map_err(|e| e.to_string())?;
    for k in 1..f.map.forward_image(e4).len() {
        let r = subdivide(&f, e4, k).map_err(|e| e.to_string())?;
        ensure(r.invariants_preserved(), || format!("subdivision at {k} changed invariants"))?;
        let l = r.rep.pf().map_err(|e| e.to_string())?;
        ensure(l.cmp_exact(&lambda) == Ordering::Equal, || format!("subdivision at {k} changed λ"))?;
    }
    let g = parse_file(&fixture("forest.gog")).map_err(|e| e.to_string())?.rep().map_err(|e| e.to_string())?;
    let s = invariant_forest(&g);
    let r = collapse(&g, &s).map_err(|e| e.to_string())?;
    let m = g.transition_matrix().rows;
    let keep: Vec<usize> = g.graph.edge_ids().filter(|e| !s.contains(*e)).map(|e| e.0).collect();
    let expect: Vec<Vec<u64>> = keep.iter().map(|&i| keep.iter().map(|&j| m[i][j]).collect()).collect();
    ensure(r.invariants_preserved(), || "collapse changed invariants".into())?;
    ensure(r.rep.transition_matrix().rows == expect, || "collapse did not delete rows and columns".into())?;
    Ok(format!("{steps} audited moves, subdivision and collapse checked directly"))
}

fn main() {
    let runs = run_pipelines();
    let shared = |f: fn(&Runs) -> Check| -> Check { runs.as_ref().map_err(Clone::clone).and_then(f) };
    let criteria: [Criterion; 8] = [
        ("Example 1 matrix", Box::new(c1)),
        ("eigenvalue chain", Box::new(c2)),
        ("train track for Example 1", Box::new(c3)),
        ("outer class preserved", Box::new(move || shared(c4))),
        ("pf sequence descent", Box::new(move || shared(c5))),
        ("checker verdicts and witnesses", Box::new(move || shared(c6))),
        ("Perron-Frobenius bounds and oracle", Box::new(c7)),
        ("move receipts", Box::new(move || shared(c8))),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let t = Instant::now();
        let result = check();
        let time = format!("{:.2?}", t.elapsed());
        let known = KNOWN_FAILURES.contains(&n);
        match (&result, known) {
            (Ok(d), false) => println!("PASS {n} {name} ({time}): {d}"),
            (Err(d), true) => println!("FAIL {n} {name} ({time}): {d} [known]"),
            (Err(d), false) => {
                unexpected += 1;
                println!("FAIL {n} {name} ({time}): {d}");
            }
            (Ok(d), true) => {
                unexpected += 1;
                println!("PASS {n} {name} ({time}): {d} [listed as a known failure]");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
