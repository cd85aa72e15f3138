//! Graph file formats.
//!
//! * edge list: a `p <n> <m>` header, then one `u v` pair per line (0-based);
//! * DIMACS: optional `p edge <n> <m>` header, then `e u v` lines (1-based);
//! * JSON: `{"n": 4, "edges": [[0, 1], ...]}`.
//!
//! Lines starting with `c` or `#` are comments in the text formats. The
//! reader detects the format from the first non-comment token; the writer
//! always emits the edge-list form with edges sorted lexicographically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphBuilder, GraphError, LabeledPartition, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
    Json,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

fn perr(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#') || t == "c" || t.starts_with("c ") || t.starts_with("c\t")
}

pub fn detect_format(text: &str) -> Option<GraphFormat> {
    let first = text.lines().find(|l| !is_comment(l))?;
    let mut toks = first.split_whitespace();
    match toks.next()? {
        t if t.starts_with('{') => Some(GraphFormat::Json),
        "e" => Some(GraphFormat::Dimacs),
        "p" => match toks.next() {
            Some(t) if t.parse::<usize>().is_ok() => Some(GraphFormat::EdgeList),
            Some(_) => Some(GraphFormat::Dimacs),
            None => None,
        },
        _ => None,
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    match detect_format(text) {
        Some(GraphFormat::Json) => parse_json(text),
        Some(GraphFormat::Dimacs) => parse_dimacs(text),
        Some(GraphFormat::EdgeList) => parse_edge_list(text),
        None => Err(perr(1, "unrecognised graph format")),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut builder: Option<GraphBuilder> = None;
    let mut expected_m = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if is_comment(line) {
            continue;
        }
        let mut toks = line.split_whitespace();
        match &mut builder {
            None => {
                if toks.next() != Some("p") {
                    return Err(perr(ln, "expected `p <n> <m>` header"));
                }
                let n = parse_usize(toks.next(), ln, "vertex count")?;
                expected_m = parse_usize(toks.next(), ln, "edge count")?;
                builder = Some(GraphBuilder::new(n)?);
            }
            Some(b) => {
                let u = parse_usize(toks.next(), ln, "endpoint")?;
                let v = parse_usize(toks.next(), ln, "endpoint")?;
                if toks.next().is_some() {
                    return Err(perr(ln, "trailing tokens"));
                }
                b.add_edge(u, v).map_err(|e| perr(ln, e.to_string()))?;
            }
        }
    }
    let g = builder.ok_or_else(|| perr(1, "missing header"))?.build();
    if g.edge_count() != expected_m {
        return Err(perr(
            1,
            format!("header declares {expected_m} edges, found {}", g.edge_count()),
        ));
    }
    Ok(g)
}

fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut declared_n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if is_comment(line) {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                toks.next();
                declared_n = Some(parse_usize(toks.next(), ln, "vertex count")?);
            }
            Some("e") => {
                let u = parse_usize(toks.next(), ln, "endpoint")?;
                let v = parse_usize(toks.next(), ln, "endpoint")?;
                if u == 0 || v == 0 {
                    return Err(perr(ln, "DIMACS vertices are 1-based"));
                }
                edges.push((u - 1, v - 1, ln));
            }
            Some(t) => return Err(perr(ln, format!("unexpected token `{t}`"))),
            None => {}
        }
    }
    let n = declared_n.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0));
    let mut b = GraphBuilder::new(n)?;
    for (u, v, ln) in edges {
        b.add_edge(u, v).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(b.build())
}

fn parse_json(text: &str) -> Result<Graph, GraphError> {
    let jg: JsonGraph = serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))?;
    let mut b = GraphBuilder::new(jg.n)?;
    for [u, v] in jg.edges {
        b.add_edge(u, v)?;
    }
    Ok(b.build())
}

/// Canonical edge-list text. `comments` become leading `c` lines.
pub fn write_edge_list(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p {} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_json(g: &Graph) -> String {
    let jg = JsonGraph {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
    };
    serde_json::to_string(&jg).expect("graph serialises") + "\n"
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PartitionClassJson {
    pub role: String,
    pub vertices: Vec<usize>,
}

/// `{"n": .., "classes": [{"role": "A_1", "vertices": [..]}, .., {"role": "B", ..}]}`
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PartitionJson {
    pub n: usize,
    pub classes: Vec<PartitionClassJson>,
}

impl PartitionJson {
    pub fn from_partition(p: &LabeledPartition) -> Self {
        PartitionJson {
            n: p.ground().len(),
            classes: p
                .classes()
                .iter()
                .enumerate()
                .map(|(i, c)| PartitionClassJson {
                    role: p.role(i).to_string(),
                    vertices: c.to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_partition(&self) -> Result<LabeledPartition, GraphError> {
        let mut a = Vec::new();
        let mut b = None;
        for c in &self.classes {
            if let Some(&v) = c.vertices.iter().find(|&&v| v >= self.n) {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            let set: VertexSet = c.vertices.iter().collect();
            if c.role == "B" {
                if b.is_some() {
                    return Err(GraphError::InvalidPartition("two B classes".into()));
                }
                b = Some(set);
            } else if c.role.starts_with("A_") {
                if b.is_some() {
                    return Err(GraphError::InvalidPartition("A-classes must precede B".into()));
                }
                a.push(set);
            } else {
                return Err(GraphError::InvalidPartition(format!("unknown role {}", c.role)));
            }
        }
        LabeledPartition::new(self.n, a, b)
    }
}
