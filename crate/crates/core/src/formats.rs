//! Text and JSON readers and writers.
//!
//! Graphs (`n m` then `tail head` per line), metric graphs (`tail head p/q`)
//! and divisors (space-separated integers, one divisor per line) are flat
//! text; certificates are JSON. Every writer's output is accepted by the
//! matching reader and reproduces the same value.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bramble::Bramble;
use crate::chipfire::{Divisor, FiringScript, LevelChain};
use crate::harmonic::{EdgeImage, IndexedMorphism, Morphism, RefinementWitness};
use crate::graph::{MultiGraph, Vertex};
use crate::metric::{MetricGraph, PLFunction, Point, PointDivisor, Rational, VertexWitness};

/// Largest vertex or edge count accepted by the text readers.
pub const MAX_COUNT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn json_err(e: serde_json::Error) -> FormatError {
    FormatError::Json(e.to_string())
}

fn invalid(e: impl ToString) -> FormatError {
    FormatError::Invalid(e.to_string())
}

/// Nonblank lines with 1-based line numbers; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_field<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize), FormatError> {
    let (ln, head) = lines.next().ok_or_else(|| syntax(1, "missing header `n m`"))?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(syntax(ln, "header must be `n m`"));
    }
    let n: usize = parse_field(ln, toks[0], "vertex count")?;
    let m: usize = parse_field(ln, toks[1], "edge count")?;
    if n > MAX_COUNT || m > MAX_COUNT {
        return Err(syntax(ln, format!("counts above {MAX_COUNT} are not supported")));
    }
    Ok((n, m))
}

pub fn parse_graph(text: &str) -> Result<MultiGraph, FormatError> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    let mut last = 1;
    for (ln, l) in lines {
        last = ln;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "edge line must be `tail head`"));
        }
        edges.push((parse_field(ln, toks[0], "vertex")?, parse_field(ln, toks[1], "vertex")?));
        if edges.len() > m {
            return Err(syntax(ln, format!("more than {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(syntax(last, format!("expected {m} edges, found {}", edges.len())));
    }
    MultiGraph::new(n, &edges).map_err(invalid)
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.tail, e.head));
    }
    out
}

pub fn parse_divisors(text: &str) -> Result<Vec<Divisor>, FormatError> {
    content_lines(text)
        .map(|(ln, l)| {
            l.split_whitespace().map(|t| parse_field(ln, t, "chip count")).collect::<Result<Vec<i64>, _>>().map(Divisor::new)
        })
        .collect()
}

/// Exactly one divisor.
pub fn parse_divisor(text: &str) -> Result<Divisor, FormatError> {
    let mut all = parse_divisors(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        k => Err(FormatError::Invalid(format!("expected one divisor, found {k}"))),
    }
}

pub fn write_divisor(d: &Divisor) -> String {
    format!("{d}\n")
}

pub fn write_divisors(ds: &[Divisor]) -> String {
    ds.iter().map(write_divisor).collect()
}

pub fn parse_script(text: &str) -> Result<FiringScript, FormatError> {
    serde_json::from_str(text).map_err(json_err)
}

pub fn write_script(x: &FiringScript) -> String {
    serde_json::to_string(x).expect("serializable")
}

pub fn parse_chain(text: &str) -> Result<LevelChain, FormatError> {
    serde_json::from_str(text).map_err(json_err)
}

pub fn write_chain(c: &LevelChain) -> String {
    serde_json::to_string(c).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BrambleJson {
    members: Vec<Vec<Vertex>>,
}

pub fn parse_bramble(text: &str) -> Result<Bramble, FormatError> {
    let raw: BrambleJson = serde_json::from_str(text).map_err(json_err)?;
    Ok(Bramble::new(raw.members))
}

pub fn write_bramble(b: &Bramble) -> String {
    serde_json::to_string(&BrambleJson { members: b.members().to_vec() }).expect("serializable")
}

fn parse_rational(s: &str) -> Option<Rational> {
    if s.is_empty() || s.contains(char::is_whitespace) || s.starts_with('+') || s.contains("/+") || s.contains("/-") {
        return None;
    }
    Rational::from_str(s).ok()
}

pub fn parse_metric_graph(text: &str) -> Result<MetricGraph, FormatError> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    let mut lengths = Vec::with_capacity(m);
    let mut last = 1;
    for (ln, l) in lines {
        last = ln;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(ln, "edge line must be `tail head length`"));
        }
        edges.push((parse_field(ln, toks[0], "vertex")?, parse_field(ln, toks[1], "vertex")?));
        lengths.push(parse_rational(toks[2]).ok_or_else(|| syntax(ln, format!("bad length `{}`", toks[2])))?);
        if edges.len() > m {
            return Err(syntax(ln, format!("more than {m} edges")));
        }
    }
    if edges.len() != m {
        return Err(syntax(last, format!("expected {m} edges, found {}", edges.len())));
    }
    let g = MultiGraph::new(n, &edges).map_err(invalid)?;
    MetricGraph::new(g, lengths).map_err(invalid)
}

pub fn write_metric_graph(gamma: &MetricGraph) -> String {
    let g = gamma.graph();
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (e, l) in g.edges().iter().zip(gamma.lengths()) {
        out.push_str(&format!("{} {} {}\n", e.tail, e.head, l));
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TermJson {
    Vertex { vertex: Vertex, c: i64 },
    Edge { edge: usize, offset: String, c: i64 },
}

fn divisor_from_json(terms: Vec<TermJson>) -> Result<PointDivisor, FormatError> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        out.push(match t {
            TermJson::Vertex { vertex, c } => (Point::Vertex(vertex), c),
            TermJson::Edge { edge, offset, c } => {
                let off = parse_rational(&offset).ok_or_else(|| FormatError::Invalid(format!("bad offset `{offset}`")))?;
                (Point::Edge { edge, offset: off }, c)
            }
        });
    }
    Ok(PointDivisor::new(out))
}

fn divisor_to_json(d: &PointDivisor) -> Vec<TermJson> {
    d.terms()
        .iter()
        .map(|(p, c)| match p {
            Point::Vertex(v) => TermJson::Vertex { vertex: *v, c: *c },
            Point::Edge { edge, offset } => TermJson::Edge { edge: *edge, offset: offset.to_string(), c: *c },
        })
        .collect()
}

pub fn parse_point_divisor(text: &str) -> Result<PointDivisor, FormatError> {
    divisor_from_json(serde_json::from_str(text).map_err(json_err)?)
}

pub fn write_point_divisor(d: &PointDivisor) -> String {
    serde_json::to_string(&divisor_to_json(d)).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionJson {
    edges: Vec<Vec<(String, String)>>,
}

fn function_from_json(raw: FunctionJson) -> Result<PLFunction, FormatError> {
    let mut edges = Vec::with_capacity(raw.edges.len());
    for pts in raw.edges {
        let mut out = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            let px = parse_rational(&x).ok_or_else(|| FormatError::Invalid(format!("bad rational `{x}`")))?;
            let py = parse_rational(&y).ok_or_else(|| FormatError::Invalid(format!("bad rational `{y}`")))?;
            out.push((px, py));
        }
        edges.push(out);
    }
    Ok(PLFunction { edges })
}

fn function_to_json(f: &PLFunction) -> FunctionJson {
    FunctionJson {
        edges: f.edges.iter().map(|pts| pts.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect()).collect(),
    }
}

pub fn parse_pl_function(text: &str) -> Result<PLFunction, FormatError> {
    function_from_json(serde_json::from_str(text).map_err(json_err)?)
}

pub fn write_pl_function(f: &PLFunction) -> String {
    serde_json::to_string(&function_to_json(f)).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessEntryJson {
    vertex: Vertex,
    divisor: Vec<TermJson>,
    function: FunctionJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    divisor: Vec<TermJson>,
    witnesses: Vec<WitnessEntryJson>,
}

/// A metric divisor `D` and its per-vertex witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFile {
    pub divisor: PointDivisor,
    pub witnesses: Vec<VertexWitness>,
}

pub fn parse_witness_file(text: &str) -> Result<WitnessFile, FormatError> {
    let raw: WitnessJson = serde_json::from_str(text).map_err(json_err)?;
    let divisor = divisor_from_json(raw.divisor)?;
    let witnesses = raw
        .witnesses
        .into_iter()
        .map(|w| {
            Ok(VertexWitness {
                vertex: w.vertex,
                divisor: divisor_from_json(w.divisor)?,
                function: function_from_json(w.function)?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    Ok(WitnessFile { divisor, witnesses })
}

pub fn write_witness_file(w: &WitnessFile) -> String {
    let raw = WitnessJson {
        divisor: divisor_to_json(&w.divisor),
        witnesses: w
            .witnesses
            .iter()
            .map(|x| WitnessEntryJson {
                vertex: x.vertex,
                divisor: divisor_to_json(&x.divisor),
                function: function_to_json(&x.function),
            })
            .collect(),
    };
    serde_json::to_string(&raw).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeMapJson {
    ToEdge { edge: usize, to_edge: usize },
    ToVertex { edge: usize, to_vertex: Vertex },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismJson {
    vertex_map: Vec<Vertex>,
    edge_map: Vec<EdgeMapJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    indices: BTreeMap<String, u64>,
}

/// Reads a morphism between the given graphs. Edges missing from `indices`
/// get index 1.
pub fn parse_morphism(source: &MultiGraph, target: &MultiGraph, text: &str) -> Result<IndexedMorphism, FormatError> {
    let raw: MorphismJson = serde_json::from_str(text).map_err(json_err)?;
    let m = source.edge_count();
    let mut edge_map: Vec<Option<EdgeImage>> = vec![None; m];
    for entry in raw.edge_map {
        let (e, img) = match entry {
            EdgeMapJson::ToEdge { edge, to_edge } => (edge, EdgeImage::Edge(to_edge)),
            EdgeMapJson::ToVertex { edge, to_vertex } => (edge, EdgeImage::Vertex(to_vertex)),
        };
        let slot = edge_map.get_mut(e).ok_or_else(|| FormatError::Invalid(format!("edge {e} does not exist")))?;
        if slot.replace(img).is_some() {
            return Err(FormatError::Invalid(format!("edge {e} is mapped twice")));
        }
    }
    let edge_map = edge_map
        .into_iter()
        .enumerate()
        .map(|(e, img)| img.ok_or_else(|| FormatError::Invalid(format!("edge {e} is not mapped"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut indices = vec![1; m];
    for (k, r) in raw.indices {
        let e: usize = k.parse().map_err(|_| FormatError::Invalid(format!("bad index key `{k}`")))?;
        *indices.get_mut(e).ok_or_else(|| FormatError::Invalid(format!("index for missing edge {e}")))? = r;
    }
    let base = Morphism::new(source.clone(), target.clone(), raw.vertex_map, edge_map).map_err(invalid)?;
    Ok(IndexedMorphism { base, indices })
}

pub fn write_morphism(psi: &IndexedMorphism) -> String {
    let edge_map = psi
        .base
        .edge_map
        .iter()
        .enumerate()
        .map(|(e, img)| match *img {
            EdgeImage::Edge(j) => EdgeMapJson::ToEdge { edge: e, to_edge: j },
            EdgeImage::Vertex(v) => EdgeMapJson::ToVertex { edge: e, to_vertex: v },
        })
        .collect();
    let indices = psi
        .indices
        .iter()
        .enumerate()
        .filter(|&(e, &r)| r != 1 && matches!(psi.base.edge_map[e], EdgeImage::Edge(_)))
        .map(|(e, &r)| (e.to_string(), r))
        .collect();
    serde_json::to_string(&MorphismJson { vertex_map: psi.base.vertex_map.clone(), edge_map, indices }).expect("serializable")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RefinementJson {
    vertex_map: Vec<Vertex>,
    edge_paths: Vec<Vec<usize>>,
}

pub fn parse_refinement(text: &str) -> Result<RefinementWitness, FormatError> {
    let raw: RefinementJson = serde_json::from_str(text).map_err(json_err)?;
    Ok(RefinementWitness { vertex_map: raw.vertex_map, edge_paths: raw.edge_paths })
}

pub fn write_refinement(w: &RefinementWitness) -> String {
    serde_json::to_string(&RefinementJson { vertex_map: w.vertex_map.clone(), edge_paths: w.edge_paths.clone() })
        .expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family;

    #[test]
    fn graph_text() {
        let g = family::banana(2).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "2 2\n0 1\n0 1\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(parse_graph("# comment\n3 2\n0 1\n\n1 2 # trailing\n").unwrap(), family::path(3).unwrap());
        assert_eq!(parse_graph("2 1\n0 0\n").unwrap_err().to_string(), "edge 0 is a loop at vertex 0");
        assert_eq!(parse_graph("2 2\n0 1\n").unwrap_err(), syntax(2, "expected 2 edges, found 1"));
        assert_eq!(parse_graph("2 1\n0 x\n").unwrap_err(), syntax(2, "bad vertex `x`"));
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn divisor_text() {
        let ds = parse_divisors("1 0 -2\n\n3 3 3\n").unwrap();
        assert_eq!(ds, vec![Divisor::new(vec![1, 0, -2]), Divisor::new(vec![3, 3, 3])]);
        assert_eq!(write_divisors(&ds), "1 0 -2\n3 3 3\n");
        assert!(parse_divisor("1 2\n3 4\n").is_err());
    }

    #[test]
    fn json_certificates() {
        let x = FiringScript::new(vec![0, 1, 2]);
        assert_eq!(write_script(&x), r#"{"script":[0,1,2]}"#);
        assert_eq!(parse_script(&write_script(&x)).unwrap(), x);
        let c = LevelChain { chain: vec![vec![2], vec![1, 2]] };
        assert_eq!(write_chain(&c), r#"{"chain":[[2],[1,2]]}"#);
        assert_eq!(parse_chain(&write_chain(&c)).unwrap(), c);
        let b = parse_bramble(r#"{"members":[[2,0],[1],[1]]}"#).unwrap();
        assert_eq!(write_bramble(&b), r#"{"members":[[0,2],[1]]}"#);
    }

    #[test]
    fn metric_text() {
        let gamma = parse_metric_graph("2 2\n0 1 1/2\n0 1 2/6\n").unwrap();
        assert_eq!(write_metric_graph(&gamma), "2 2\n0 1 1/2\n0 1 1/3\n");
        assert!(parse_metric_graph("2 1\n0 1 0\n").is_err());
        assert!(parse_metric_graph("2 1\n0 1 1/0\n").is_err());
        assert!(parse_metric_graph("2 1\n0 1 +1\n").is_err());
    }

    #[test]
    fn metric_json() {
        let text = r#"[{"vertex":1,"c":2},{"edge":0,"offset":"1/2","c":-1}]"#;
        let d = parse_point_divisor(text).unwrap();
        assert_eq!(d.degree(), 1);
        assert_eq!(write_point_divisor(&d), r#"[{"vertex":1,"c":2},{"edge":0,"offset":"1/2","c":-1}]"#);
        let f = parse_pl_function(r#"{"edges":[[["0","0"],["1","1"]]]}"#).unwrap();
        assert_eq!(write_pl_function(&f), r#"{"edges":[[["0","0"],["1","1"]]]}"#);
        let w = WitnessFile {
            divisor: d.clone(),
            witnesses: vec![VertexWitness { vertex: 1, divisor: d, function: f }],
        };
        assert_eq!(parse_witness_file(&write_witness_file(&w)).unwrap(), w);
    }

    #[test]
    fn morphism_json() {
        let b2 = family::banana(2).unwrap();
        let k2 = family::path(2).unwrap();
        let text = r#"{"vertex_map":[0,1],"edge_map":[{"edge":1,"to_edge":0},{"edge":0,"to_edge":0}],"indices":{"1":3}}"#;
        let psi = parse_morphism(&b2, &k2, text).unwrap();
        assert_eq!(psi.indices, vec![1, 3]);
        let out = write_morphism(&psi);
        assert_eq!(out, r#"{"vertex_map":[0,1],"edge_map":[{"edge":0,"to_edge":0},{"edge":1,"to_edge":0}],"indices":{"1":3}}"#);
        assert_eq!(parse_morphism(&b2, &k2, &out).unwrap(), psi);
        assert!(parse_morphism(&b2, &k2, r#"{"vertex_map":[0,1],"edge_map":[{"edge":0,"to_edge":0}]}"#).is_err());
        let k3 = family::complete(3).unwrap();
        let vertical = r#"{"vertex_map":[0,0,1],"edge_map":[{"edge":0,"to_vertex":0},{"edge":1,"to_edge":0},{"edge":2,"to_edge":0}]}"#;
        assert_eq!(parse_morphism(&k3, &k2, vertical).unwrap().base.edge_map[0], EdgeImage::Vertex(0));
    }
}
