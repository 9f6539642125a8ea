mod common;

use std::path::Path;

use common::*;
use gog_core::format::{emit, emit_table, parse, parse_file, parse_path_str, parse_table, FormatError, GogDocument, GroupSpec};
use gog_core::gog::VertexId;
use gog_core::rep::verify_outer_class;
use gog_core::traintrack::train_track_algorithm;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const S3: &str = "\
# rotations r, r2 and reflections s, sr, sr2
1 r r2 s sr sr2
1 r r2 s sr sr2
r r2 1 sr2 s sr
r2 1 r sr sr2 s
s sr sr2 1 r r2
sr sr2 s r2 1 r
sr2 s sr r r2 1
";

fn err(text: &str) -> FormatError {
    parse(text, Path::new(".")).unwrap_err()
}

#[test]
fn fixtures_round_trip_byte_stable() {
    for name in ["example1.gog", "f2.gog", "nielsen.gog", "reducible.gog"] {
        let doc = parse_file(&fixture(name)).unwrap();
        let once = emit(&doc);
        let again = emit(&parse(&once, Path::new(".")).unwrap());
        assert_eq!(once, again, "{name}");
        let (a, b) = (doc.rep_unchecked(), parse(&once, Path::new(".")).unwrap().rep_unchecked());
        assert_eq!(a.graph.invariants(), b.graph.invariants());
        assert_eq!(a.transition_matrix().rows, b.transition_matrix().rows);
        assert_eq!(a.map.edge_images, b.map.edge_images);
    }
}

#[test]
fn example_one_fixture_matches_the_construction() {
    let f = parse_file(&fixture("example1.gog")).unwrap().rep().unwrap();
    assert_eq!(f.transition_matrix().rows, vec![vec![0, 0, 0, 1], vec![1, 0, 0, 2], vec![0, 1, 0, 2], vec![0, 0, 1, 2]]);
    let built = example1_rep();
    assert_eq!(f.map.edge_images, built.map.edge_images);
    assert_eq!(verify_outer_class(&f, &built), Ok(true));
    let e4 = f.graph.edge_by_name("e4").unwrap();
    assert_eq!(f.map.forward_image(e4).display(&f.graph), "e1 ~e4 d@v4 e4 ~e2 b@v2 e2 ~e3 c@v3 e3");
}

#[test]
fn marking_survives_emit_and_parse() {
    let f = example1_rep();
    let out = train_track_algorithm(&f, 1000).unwrap();
    let doc = parse_file(&fixture("example1.gog")).unwrap();
    let text = emit(&GogDocument::from_rep(&out.rep, "g", &doc.groups));
    assert!(text.contains("marking\n"));
    assert!(text.contains("map g\n"));
    let back = parse(&text, Path::new(".")).unwrap().rep().unwrap();
    assert_eq!(verify_outer_class(&f, &back), Ok(true));
    assert!(back.is_train_track());
}

#[test]
fn table_groups_resolve_relative_to_the_document() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s3.tbl"), S3).unwrap();
    let text = "\
group S table s3.tbl
vertex *
vertex v S
edge e v *
edge t * *
map f
  hom v: r -> r2@v
  hom v: s -> s@v
  edgemap e -> e
  edgemap t -> t
end
";
    std::fs::write(dir.path().join("s.gog"), text).unwrap();
    let doc = parse_file(&dir.path().join("s.gog")).unwrap();
    assert_eq!(doc.groups[0].spec, GroupSpec::Table("s3.tbl".into()));
    let f = doc.rep().unwrap();
    assert_eq!(f.graph.group(VertexId(1)).order(), 6);
    let emitted = emit(&doc);
    assert!(emitted.starts_with("group S table s3.tbl\n"));
    assert_eq!(emitted, emit(&parse(&emitted, dir.path()).unwrap()));
    assert!(matches!(parse(text, Path::new("/nonexistent")), Err(FormatError::Table { .. })));

    let g = parse_table("S", S3).unwrap();
    assert_eq!(emit_table(&parse_table("S", &emit_table(&g)).unwrap()), emit_table(&g));
    assert!(parse_table("S", "1 a\n1 a\na a\n").is_err());
}

#[test]
fn cyclic_generator_symbols() {
    let text = "group Z cyclic 3 t\nvertex v Z\nvertex *\nedge e v *\nmap f\n  hom v: t -> t^2@v\n  edgemap e -> e\nend\n";
    let doc = parse(text, Path::new(".")).unwrap();
    assert!(emit(&doc).starts_with("group Z cyclic 3 t\n"));
    let z = "group Z cyclic 3\nvertex v Z\nvertex *\nedge e v *\nmap f\n  hom v: z -> z^-1@v\n  edgemap e -> e\nend\n";
    let plain = emit(&parse(z, Path::new(".")).unwrap());
    assert!(plain.contains("hom v: z -> z^2@v"), "{plain}");
    assert!(plain.starts_with("group Z cyclic 3\n"));
    assert!(matches!(err(&text.replace("t^2", "t^0")), FormatError::Invalid { .. }));
}

#[test]
fn errors_carry_positions() {
    assert!(matches!(err(""), FormatError::Parse { line: 1, col: 1, ref msg } if msg.starts_with("no graph")));
    assert!(matches!(err("vertex *"), FormatError::Parse { ref msg, .. } if msg.contains("no map")));
    assert!(matches!(err("group A cyclic 2\nvertex v1 Q"), FormatError::Resolve { line: 2, what: "group", .. }));
    let base = "vertex *\nedge e * *\nmap f\n  edgemap e -> e\nend\n";
    assert!(parse(base, Path::new(".")).is_ok());
    assert!(matches!(err(&base.replace("-> e", "-> e x")), FormatError::Resolve { line: 4, what: "edge", .. }));
    assert!(matches!(err(&format!("{base}bogus\n")), FormatError::Parse { line: 6, col: 1, .. }));
    assert!(matches!(err(&base.replace("  edgemap e -> e\n", "")), FormatError::Invalid { .. }));
    assert!(matches!(err(&base.replace("end\n", "")), FormatError::Parse { .. }));
    assert!(matches!(err("group A cyclic x\n"), FormatError::Parse { line: 1, .. }));
    let e = err(&base.replace("-> e", "e"));
    assert!(e.to_string().starts_with("line 4"), "{e}");
}

#[test]
fn untight_images_fail_validation_only() {
    let text = "vertex *\nedge e * *\nedge t * *\nmap f\n  edgemap e -> e\n  edgemap t -> e ~e t\nend\n";
    let doc = parse(text, Path::new(".")).unwrap();
    assert!(doc.rep().is_err());
    assert_eq!(doc.rep_unchecked().graph.num_edges(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn path_display_parses_back(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 5);
        let start = VertexId(rng.gen_range(0..g.num_vertices()));
        let len = rng.gen_range(0..8);
        let p = random_path(&mut rng, &g, start, len);
        let text = p.display(&g);
        prop_assert_eq!(parse_path_str(&g, &text).unwrap(), p);
    }
}
