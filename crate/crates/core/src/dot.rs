//! Graphviz rendering of a representative.

use std::fmt::Write as _;

use crate::rep::TopRep;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Vertices labelled with their groups, edges with their images.
pub fn to_dot(f: &TopRep, name: &str) -> String {
    let g = &f.graph;
    let mut out = format!("digraph {} {{\n", quote(name));
    for v in &g.vertices {
        let label = if v.group.is_trivial() { v.name.clone() } else { format!("{} <{}>", v.name, v.group.name()) };
        let _ = writeln!(out, "  {} [label={}];", quote(&v.name), quote(&label));
    }
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let label = format!("{} -> {}", ed.name, f.map.forward_image(e).display(g));
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&g.vertices[ed.from.0].name),
            quote(&g.vertices[ed.to.0].name),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}
