//! The line-oriented `.gog` text format.
//!
//! ```text
//! # comment
//! group A cyclic 2          # generator symbol defaults to the lowercased name
//! group S table s3.tbl      # table file: element names, then one row per element
//! vertex *
//! vertex v1 A
//! edge e1 v1 *
//! map f
//!   vmap v1 -> v2
//!   hom v1: a -> b@v2        # identity when absent and both ends share a group
//!   edgemap e1 -> e2 ~e3 c@v3 e3
//! end
//! marking
//!   vertex ... / edge ...    # the base graph
//!   sigma vmap|hom|edgemap   # base -> graph
//!   rho vmap|hom|edgemap     # graph -> base
//! end
//! ```
//!
//! Path tokens are `e`, `~e` and element tokens `<gen>^<int>@<vertex>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::gog::{Edge, EdgeId, EdgePath, Graph, OEdge, PathBuilder, Vertex, VertexId};
use crate::groups::{same_group, Elem, FiniteGroup, GroupIso, GroupKind};
use crate::rep::{carry_hom, GraphMap, Marking, RepError, TopRep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: unresolved {what} `{symbol}`")]
    Resolve { line: usize, what: &'static str, symbol: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("group table {path}: {msg}")]
    Table { path: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    Cyclic { order: u32, gen: String },
    /// Path as written in the file.
    Table(String),
}

#[derive(Debug, Clone)]
pub struct GroupDecl {
    pub name: String,
    pub spec: GroupSpec,
    pub group: Arc<FiniteGroup>,
}

#[derive(Debug, Clone)]
pub struct GogDocument {
    pub groups: Vec<GroupDecl>,
    pub graph: Graph,
    pub maps: Vec<(String, GraphMap)>,
    pub marking: Option<Marking>,
}

impl GogDocument {
    /// The first map as a validated representative; the identity marking if none is given.
    pub fn rep(&self) -> Result<TopRep, RepError> {
        let f = self.rep_unchecked();
        f.validate()?;
        Ok(f)
    }

    /// The first map without checking images, for feeding the checker.
    pub fn rep_unchecked(&self) -> TopRep {
        let map = self.maps[0].1.clone();
        let marking = self.marking.clone().unwrap_or_else(|| Marking::identity(&self.graph));
        TopRep { graph: self.graph.clone(), map, marking: Some(marking) }
    }

    /// A document for `f`, declaring its groups with `groups` where names match.
    pub fn from_rep(f: &TopRep, name: &str, groups: &[GroupDecl]) -> GogDocument {
        let mut decls: Vec<GroupDecl> = Vec::new();
        let mut add = |grp: &Arc<FiniteGroup>| {
            if grp.is_trivial() || decls.iter().any(|d| same_group(&d.group, grp)) {
                return;
            }
            let spec = groups
                .iter()
                .find(|d| same_group(&d.group, grp))
                .map(|d| d.spec.clone())
                .unwrap_or_else(|| match grp.kind() {
                    GroupKind::Cyclic(n) => GroupSpec::Cyclic { order: *n, gen: grp.cyclic_symbol().unwrap().to_string() },
                    GroupKind::Trivial => GroupSpec::Trivial,
                    GroupKind::Table => GroupSpec::Table(format!("{}.tbl", grp.name())),
                });
            decls.push(GroupDecl { name: grp.name().to_string(), spec, group: grp.clone() });
        };
        for v in &f.graph.vertices {
            add(&v.group);
        }
        if let Some(m) = &f.marking {
            for v in &m.base.vertices {
                add(&v.group);
            }
        }
        GogDocument {
            groups: decls,
            graph: f.graph.clone(),
            maps: vec![(name.to_string(), f.map.clone())],
            marking: f.marking.clone(),
        }
    }
}

/// Parse a document; table files are resolved relative to `dir`.
pub fn parse(text: &str, dir: &Path) -> Result<GogDocument, FormatError> {
    Parser { dir: dir.to_path_buf(), groups: Vec::new() }.document(text)
}

pub fn parse_file(path: &Path) -> Result<GogDocument, ParseFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseFileError::Io(path.display().to_string(), e.to_string()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(parse(&text, dir)?)
}

#[derive(Debug, Error)]
pub enum ParseFileError {
    #[error("{0}: {1}")]
    Io(String, String),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Read a group table: the first line lists element names (identity first), then
/// one line per element gives its products with each element, by name.
pub fn parse_table(name: &str, text: &str) -> Result<FiniteGroup, String> {
    let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
    let names: Vec<String> = lines.next().ok_or("empty table")?.split_whitespace().map(str::to_string).collect();
    let index = |s: &str| names.iter().position(|n| n == s).map(|i| i as u32).ok_or(format!("unknown element {s}"));
    let rows: Vec<Vec<u32>> = lines.map(|l| l.split_whitespace().map(index).collect()).collect::<Result<_, _>>()?;
    FiniteGroup::from_table(name, names.clone(), rows).map_err(|e| e.to_string())
}

pub fn emit_table(g: &FiniteGroup) -> String {
    let names = g.element_names();
    let mut out = names.join(" ");
    out.push('\n');
    for a in g.elements() {
        let row: Vec<&str> = g.elements().map(|b| names[g.mul(a, b).index()].as_str()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

struct Tok<'a> {
    s: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let code = line.split('#').next().unwrap();
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { s: &code[s..i], col: code[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct Parser {
    dir: PathBuf,
    groups: Vec<GroupDecl>,
}

#[derive(Default)]
struct MapLines<'a> {
    vmap: Vec<(usize, Vec<Tok<'a>>)>,
    hom: Vec<(usize, Vec<Tok<'a>>)>,
    edgemap: Vec<(usize, Vec<Tok<'a>>)>,
}

impl<'a> MapLines<'a> {
    fn push(&mut self, n: usize, toks: Vec<Tok<'a>>) -> Result<(), FormatError> {
        match toks[0].s {
            "vmap" => self.vmap.push((n, toks)),
            "hom" => self.hom.push((n, toks)),
            "edgemap" => self.edgemap.push((n, toks)),
            other => return Err(perr(n, toks[0].col, format!("expected vmap, hom or edgemap, found `{other}`"))),
        }
        Ok(())
    }
}

fn perr(line: usize, col: usize, msg: String) -> FormatError {
    FormatError::Parse { line, col, msg }
}

fn end_col(t: &Tok) -> usize {
    t.col + t.s.chars().count()
}

fn expect<'t, 'a>(toks: &'t [Tok<'a>], i: usize, n: usize, what: &str) -> Result<&'t Tok<'a>, FormatError> {
    toks.get(i).ok_or_else(|| perr(n, toks.last().map_or(1, end_col), format!("expected {what}")))
}

fn no_more(toks: &[Tok], i: usize, n: usize) -> Result<(), FormatError> {
    match toks.get(i) {
        Some(t) => Err(perr(n, t.col, format!("unexpected `{}`", t.s))),
        None => Ok(()),
    }
}

#[derive(Default)]
struct GraphLines {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, String, String, String)>,
}

impl Parser {
    fn document(&mut self, text: &str) -> Result<GogDocument, FormatError> {
        let mut main = GraphLines::default();
        let mut maps: Vec<(usize, String, MapLines)> = Vec::new();
        let mut base = GraphLines::default();
        let mut sigma = MapLines::default();
        let mut rho = MapLines::default();
        let mut marking_line = None;
        enum Block {
            Top,
            Map,
            Marking,
        }
        let mut block = Block::Top;
        let mut last_line = 0;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            last_line = n;
            let toks = tokens(line);
            if toks.is_empty() {
                continue;
            }
            match (&block, toks[0].s) {
                (Block::Map | Block::Marking, "end") => {
                    no_more(&toks, 1, n)?;
                    block = Block::Top;
                }
                (Block::Map, _) => maps.last_mut().unwrap().2.push(n, toks)?,
                (Block::Marking, "vertex" | "edge") => self.graph_line(&mut base, n, &toks)?,
                (Block::Marking, side @ ("sigma" | "rho")) => {
                    let rest: Vec<Tok> = toks.into_iter().skip(1).collect();
                    if rest.is_empty() {
                        return Err(perr(n, end_col(&tokens(line)[0]), "expected vmap, hom or edgemap".into()));
                    }
                    if side == "sigma" { &mut sigma } else { &mut rho }.push(n, rest)?;
                }
                (Block::Marking, other) => {
                    return Err(perr(n, toks[0].col, format!("expected vertex, edge, sigma, rho or end, found `{other}`")))
                }
                (Block::Top, "group") => self.group_line(n, &toks)?,
                (Block::Top, "vertex" | "edge") => self.graph_line(&mut main, n, &toks)?,
                (Block::Top, "map") => {
                    let name = expect(&toks, 1, n, "a map name")?.s.to_string();
                    no_more(&toks, 2, n)?;
                    maps.push((n, name, MapLines::default()));
                    block = Block::Map;
                }
                (Block::Top, "marking") => {
                    no_more(&toks, 1, n)?;
                    if marking_line.is_some() {
                        return Err(perr(n, 1, "second marking block".into()));
                    }
                    marking_line = Some(n);
                    block = Block::Marking;
                }
                (Block::Top, other) => return Err(perr(n, toks[0].col, format!("unknown declaration `{other}`"))),
            }
        }
        if !matches!(block, Block::Top) {
            return Err(perr(last_line + 1, 1, "missing `end`".into()));
        }
        if main.vertices.is_empty() {
            return Err(perr(last_line.max(1), 1, "no graph: the document declares no vertices".into()));
        }
        if maps.is_empty() {
            return Err(perr(last_line, 1, "no map block".into()));
        }
        let graph = build_graph(main, 1)?;
        let mut out_maps = Vec::new();
        for (n, name, lines) in maps {
            if out_maps.iter().any(|(m, _)| m == &name) {
                return Err(FormatError::Invalid { line: n, msg: format!("duplicate map {name}") });
            }
            out_maps.push((name, self.map(&graph, &graph, lines, n)?));
        }
        let marking = match marking_line {
            None => None,
            Some(n) => {
                let base = build_graph(base, n)?;
                let s = self.map(&base, &graph, sigma, n)?;
                let r = self.map(&graph, &base, rho, n)?;
                let m = Marking { base, sigma: s, rho: r };
                m.validate(&graph).map_err(|e| FormatError::Invalid { line: n, msg: e.to_string() })?;
                Some(m)
            }
        };
        Ok(GogDocument { groups: std::mem::take(&mut self.groups), graph, maps: out_maps, marking })
    }

    fn group_line(&mut self, n: usize, toks: &[Tok]) -> Result<(), FormatError> {
        let name = expect(toks, 1, n, "a group name")?;
        if self.groups.iter().any(|g| g.name == name.s) {
            return Err(perr(n, name.col, format!("group {} declared twice", name.s)));
        }
        let kind = expect(toks, 2, n, "trivial, cyclic or table")?;
        let (spec, group, used) = match kind.s {
            "trivial" => (GroupSpec::Trivial, FiniteGroup::trivial(name.s), 3),
            "cyclic" => {
                let t = expect(toks, 3, n, "an order")?;
                let order: u32 = t.s.parse().ok().filter(|&k| k > 0).ok_or_else(|| perr(n, t.col, format!("bad order `{}`", t.s)))?;
                let (gen, used) = match toks.get(4) {
                    Some(g) => (g.s.to_string(), 5),
                    None => (name.s.to_lowercase(), 4),
                };
                check_symbol(&gen).map_err(|m| perr(n, toks.get(4).map_or(t.col, |g| g.col), m))?;
                let group = FiniteGroup::cyclic(name.s, order, &gen).map_err(|e| perr(n, t.col, e.to_string()))?;
                if order == 1 {
                    (GroupSpec::Trivial, group, used)
                } else {
                    (GroupSpec::Cyclic { order, gen }, group, used)
                }
            }
            "table" => {
                let t = expect(toks, 3, n, "a table file")?;
                let path = self.dir.join(t.s);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| FormatError::Table { path: t.s.to_string(), msg: e.to_string() })?;
                let group = parse_table(name.s, &text).map_err(|msg| FormatError::Table { path: t.s.to_string(), msg })?;
                for s in group.element_names() {
                    check_symbol(s).map_err(|msg| FormatError::Table { path: t.s.to_string(), msg })?;
                }
                (GroupSpec::Table(t.s.to_string()), group, 4)
            }
            other => return Err(perr(n, kind.col, format!("expected trivial, cyclic or table, found `{other}`"))),
        };
        no_more(toks, used, n)?;
        self.groups.push(GroupDecl { name: name.s.to_string(), spec, group: Arc::new(group) });
        Ok(())
    }

    fn graph_line(&self, out: &mut GraphLines, n: usize, toks: &[Tok]) -> Result<(), FormatError> {
        let name = expect(toks, 1, n, "a name")?;
        check_symbol(name.s).map_err(|m| perr(n, name.col, m))?;
        if toks[0].s == "vertex" {
            if out.vertices.iter().any(|v| v.name == name.s) {
                return Err(perr(n, name.col, format!("vertex {} declared twice", name.s)));
            }
            let group = match toks.get(2) {
                None => Arc::new(FiniteGroup::trivial("1")),
                Some(t) => self.group(t.s).ok_or(FormatError::Resolve { line: n, what: "group", symbol: t.s.to_string() })?,
            };
            no_more(toks, 3, n)?;
            out.vertices.push(Vertex { name: name.s.to_string(), group });
        } else {
            if out.edges.iter().any(|e| e.1 == name.s) {
                return Err(perr(n, name.col, format!("edge {} declared twice", name.s)));
            }
            let from = expect(toks, 2, n, "the origin vertex")?;
            let to = expect(toks, 3, n, "the terminal vertex")?;
            no_more(toks, 4, n)?;
            out.edges.push((n, name.s.to_string(), from.s.to_string(), to.s.to_string()));
        }
        Ok(())
    }

    fn group(&self, name: &str) -> Option<Arc<FiniteGroup>> {
        self.groups.iter().find(|g| g.name == name).map(|g| g.group.clone())
    }

    fn map(&self, src: &Graph, dst: &Graph, lines: MapLines, block: usize) -> Result<GraphMap, FormatError> {
        let vertex = |g: &Graph, n: usize, s: &str| {
            g.vertex_by_name(s).ok_or(FormatError::Resolve { line: n, what: "vertex", symbol: s.to_string() })
        };
        let mut vmap: Vec<Option<VertexId>> = vec![None; src.num_vertices()];
        for (n, toks) in &lines.vmap {
            let v = expect(toks, 1, *n, "a vertex")?;
            arrow(toks, 2, *n)?;
            let w = expect(toks, 3, *n, "a vertex")?;
            no_more(toks, 4, *n)?;
            let (v, w) = (vertex(src, *n, v.s)?, vertex(dst, *n, w.s)?);
            if vmap[v.0].replace(w).is_some_and(|old| old != w) {
                return Err(FormatError::Invalid { line: *n, msg: format!("vertex {} mapped twice", src.vertices[v.0].name) });
            }
        }
        let mut images: Vec<Option<EdgePath>> = vec![None; src.num_edges()];
        for (n, toks) in &lines.edgemap {
            let e = expect(toks, 1, *n, "an edge")?;
            let id = src.edge_by_name(e.s).ok_or(FormatError::Resolve { line: *n, what: "edge", symbol: e.s.to_string() })?;
            arrow(toks, 2, *n)?;
            if toks.len() < 4 {
                return Err(perr(*n, end_col(&toks[toks.len() - 1]), "expected a path".into()));
            }
            let p = parse_path(dst, &toks[3..], *n)?;
            if images[id.0].replace(p).is_some() {
                return Err(FormatError::Invalid { line: *n, msg: format!("edge {} mapped twice", e.s) });
            }
        }
        let mut edge_images = Vec::with_capacity(src.num_edges());
        for e in src.edge_ids() {
            let p = images[e.0].take().ok_or_else(|| FormatError::Invalid {
                line: block,
                msg: format!("no edgemap for {}", src.edge(e).name),
            })?;
            let ed = src.edge(e);
            for (v, w) in [(ed.from, p.start()), (ed.to, p.end(dst))] {
                if vmap[v.0].replace(w).is_some_and(|old| old != w) {
                    return Err(FormatError::Invalid {
                        line: block,
                        msg: format!("vertex {} has inconsistent images", src.vertices[v.0].name),
                    });
                }
            }
            edge_images.push(p);
        }
        let vertex_map: Vec<VertexId> = vmap
            .iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| FormatError::Invalid { line: block, msg: format!("no vmap for {}", src.vertices[i].name) })
            })
            .collect::<Result<_, _>>()?;
        let mut gens: Vec<Vec<(Elem, Elem)>> = vec![Vec::new(); src.num_vertices()];
        for (n, toks) in &lines.hom {
            let v = expect(toks, 1, *n, "a vertex")?;
            let Some(name) = v.s.strip_suffix(':') else {
                return Err(perr(*n, end_col(v), "expected `:` after the vertex".into()));
            };
            let vid = vertex(src, *n, name)?;
            let x = expect(toks, 2, *n, "a generator")?;
            arrow(toks, 3, *n)?;
            let y = expect(toks, 4, *n, "an element")?;
            no_more(toks, 5, *n)?;
            let (gx, ax) = element(src.group(vid), x, *n)?;
            if gx.is_some_and(|w| w != name) {
                return Err(perr(*n, x.col, format!("generator at {} expected", name)));
            }
            let target = vertex_map[vid.0];
            let (gy, by) = element(dst.group(target), y, *n)?;
            if let Some(w) = gy {
                if vertex(dst, *n, w)? != target {
                    return Err(perr(*n, y.col, format!("{name} maps to {}, not {w}", dst.vertices[target.0].name)));
                }
            }
            gens[vid.0].push((ax, by));
        }
        let vertex_homs = src
            .vertex_ids()
            .map(|v| {
                let (a, b) = (src.group(v), dst.group(vertex_map[v.0]));
                if a.is_trivial() && b.is_trivial() {
                    return Ok(GroupIso::from_trivial(a, b));
                }
                if gens[v.0].is_empty() && Arc::ptr_eq(a, b) {
                    return Ok(carry_hom(a, b));
                }
                GroupIso::from_generators(a, b, &gens[v.0])
                    .map_err(|e| FormatError::Invalid { line: block, msg: format!("hom at {}: {e}", src.vertices[v.0].name) })
            })
            .collect::<Result<_, _>>()?;
        let map = GraphMap { vertex_map, vertex_homs, edge_images };
        map.validate(src, dst).map_err(|e| FormatError::Invalid { line: block, msg: e.to_string() })?;
        Ok(map)
    }
}

fn check_symbol(s: &str) -> Result<(), String> {
    if s.is_empty() || s.starts_with('~') || s.contains(['@', '^', '#', ':']) {
        Err(format!("`{s}` is not a valid name"))
    } else {
        Ok(())
    }
}

fn arrow(toks: &[Tok], i: usize, n: usize) -> Result<(), FormatError> {
    let t = expect(toks, i, n, "`->`")?;
    if t.s != "->" {
        return Err(perr(n, t.col, format!("expected `->`, found `{}`", t.s)));
    }
    Ok(())
}

/// `<gen>^<int>[@<vertex>]`; returns the vertex name if present.
fn element<'a>(grp: &FiniteGroup, t: &Tok<'a>, n: usize) -> Result<(Option<&'a str>, Elem), FormatError> {
    let (body, at) = match t.s.split_once('@') {
        Some((b, v)) => (b, Some(v)),
        None => (t.s, None),
    };
    let (sym, pow) = match body.split_once('^') {
        Some((s, k)) => (s, k.parse::<i64>().map_err(|_| perr(n, t.col + s.len() + 1, format!("bad exponent `{k}`")))?),
        None => (body, 1),
    };
    let x = grp
        .from_token(sym, pow)
        .ok_or(FormatError::Resolve { line: n, what: "group element", symbol: body.to_string() })?;
    Ok((at, x))
}

/// Parse a path written in path tokens, e.g. `e1 ~e2 b@v2 e2`.
pub fn parse_path_str(g: &Graph, text: &str) -> Result<EdgePath, FormatError> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(perr(1, 1, "expected a path".into()));
    }
    parse_path(g, &toks, 1)
}

fn parse_path(g: &Graph, toks: &[Tok], n: usize) -> Result<EdgePath, FormatError> {
    let edge = |t: &Tok| -> Result<OEdge, FormatError> {
        let (name, rev) = match t.s.strip_prefix('~') {
            Some(s) => (s, true),
            None => (t.s, false),
        };
        let e: EdgeId = g.edge_by_name(name).ok_or(FormatError::Resolve { line: n, what: "edge", symbol: name.to_string() })?;
        Ok(OEdge::new(e, rev))
    };
    let start = if toks[0].s.contains('@') {
        let v = toks[0].s.split_once('@').unwrap().1;
        g.vertex_by_name(v).ok_or(FormatError::Resolve { line: n, what: "vertex", symbol: v.to_string() })?
    } else {
        g.origin(edge(&toks[0])?)
    };
    let mut b = PathBuilder::raw(g, start);
    for t in toks {
        if t.s.contains('@') {
            let cur = b.current();
            let (at, x) = element(g.group(cur), t, n)?;
            let at = at.unwrap();
            if g.vertex_by_name(at) != Some(cur) {
                return Err(perr(n, t.col, format!("element at {at}, but the path is at {}", g.vertices[cur.0].name)));
            }
            b.push_elem(x);
        } else {
            let o = edge(t)?;
            if g.origin(o) != b.current() {
                return Err(perr(n, t.col, format!("{} does not start where the path is", t.s)));
            }
            b.push_edge(o);
        }
    }
    Ok(b.finish())
}

fn build_graph(lines: GraphLines, n0: usize) -> Result<Graph, FormatError> {
    let names: BTreeMap<&str, usize> = lines.vertices.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (n, name, from, to) in &lines.edges {
        let v = |s: &str| names.get(s).map(|&i| VertexId(i)).ok_or(FormatError::Resolve { line: *n, what: "vertex", symbol: s.to_string() });
        edges.push(Edge { name: name.clone(), from: v(from)?, to: v(to)? });
    }
    let line = lines.edges.first().map_or(n0, |e| e.0);
    Graph::new(lines.vertices, edges).map_err(|e| FormatError::Invalid { line, msg: e.to_string() })
}

/// Canonical text for a document.
pub fn emit(doc: &GogDocument) -> String {
    let mut out = String::new();
    let group_name = |grp: &Arc<FiniteGroup>| -> Option<String> {
        if grp.is_trivial() {
            return None;
        }
        doc.groups.iter().find(|d| same_group(&d.group, grp)).map(|d| d.name.clone()).or(Some(grp.name().to_string()))
    };
    for d in &doc.groups {
        let spec = match &d.spec {
            GroupSpec::Trivial => "trivial".to_string(),
            GroupSpec::Cyclic { order, gen } if *gen == d.name.to_lowercase() => format!("cyclic {order}"),
            GroupSpec::Cyclic { order, gen } => format!("cyclic {order} {gen}"),
            GroupSpec::Table(p) => format!("table {p}"),
        };
        let _ = writeln!(out, "group {} {spec}", d.name);
    }
    let graph_lines = |out: &mut String, g: &Graph, indent: &str| {
        for v in &g.vertices {
            match group_name(&v.group) {
                Some(n) => writeln!(out, "{indent}vertex {} {n}", v.name),
                None => writeln!(out, "{indent}vertex {}", v.name),
            }
            .unwrap();
        }
        for e in &g.edges {
            let _ = writeln!(out, "{indent}edge {} {} {}", e.name, g.vertices[e.from.0].name, g.vertices[e.to.0].name);
        }
    };
    graph_lines(&mut out, &doc.graph, "");
    for (name, map) in &doc.maps {
        let _ = writeln!(out, "map {name}");
        map_lines(&mut out, &doc.graph, &doc.graph, map, "  ");
        out.push_str("end\n");
    }
    if let Some(m) = &doc.marking {
        out.push_str("marking\n");
        graph_lines(&mut out, &m.base, "  ");
        map_lines(&mut out, &m.base, &doc.graph, &m.sigma, "  sigma ");
        map_lines(&mut out, &doc.graph, &m.base, &m.rho, "  rho ");
        out.push_str("end\n");
    }
    out
}

fn map_lines(out: &mut String, src: &Graph, dst: &Graph, map: &GraphMap, prefix: &str) {
    for v in src.vertex_ids() {
        let w = map.vertex_map[v.0];
        let _ = writeln!(out, "{prefix}vmap {} -> {}", src.vertices[v.0].name, dst.vertices[w.0].name);
    }
    for v in src.vertex_ids() {
        let (a, w) = (src.group(v), map.vertex_map[v.0]);
        for &x in a.generators() {
            let y = map.vertex_homs[v.0].apply(x);
            let _ = writeln!(
                out,
                "{prefix}hom {}: {} -> {}@{}",
                src.vertices[v.0].name,
                a.display_elem(x),
                dst.group(w).display_elem(y),
                dst.vertices[w.0].name
            );
        }
    }
    for e in src.edge_ids() {
        let _ = writeln!(out, "{prefix}edgemap {} -> {}", src.edge(e).name, map.edge_images[e.0].display(dst));
    }
}
