//! Graph file formats: PACE-style `.gr`, plain edge lists, graph6, plus the
//! DOT and JSON-lines exports of modification traces.

use crate::graph::{Graph, Instance, VertexId};
use crate::record::ModificationRecord;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("graph6: {0}")]
    Graph6(String),
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFileFormat {
    PaceGr,
    EdgeList,
    Graph6,
}

impl GraphFileFormat {
    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "pace" | "gr" | "pace_gr" => Some(GraphFileFormat::PaceGr),
            "edgelist" | "edge_list" | "el" => Some(GraphFileFormat::EdgeList),
            "graph6" | "g6" => Some(GraphFileFormat::Graph6),
            _ => None,
        }
    }
}

pub fn parse(format: GraphFileFormat, text: &str) -> Result<Graph, ParseError> {
    match format {
        GraphFileFormat::PaceGr => parse_pace(text),
        GraphFileFormat::EdgeList => parse_edge_list(text),
        GraphFileFormat::Graph6 => {
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            parse_graph6(line.trim())
        }
    }
}

pub fn emit(format: GraphFileFormat, g: &Graph) -> String {
    match format {
        GraphFileFormat::PaceGr => emit_pace(g),
        GraphFileFormat::EdgeList => emit_edge_list(g),
        GraphFileFormat::Graph6 => {
            let mut line = emit_graph6(g);
            line.push('\n');
            line
        }
    }
}

/// PACE-style input: `p <descriptor> <n> <m>` header, `c` comment lines,
/// 1-indexed edge lines. Any descriptor token is accepted; duplicate edges
/// and self-loops are silently dropped.
pub fn parse_pace(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    let mut n = 0u32;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if graph.is_some() {
                return Err(malformed(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(malformed(line_no, "header must be `p <descriptor> <n> <m>`"));
            }
            n = fields[1]
                .parse::<u32>()
                .map_err(|_| malformed(line_no, "vertex count is not a number"))?;
            fields[2]
                .parse::<u64>()
                .map_err(|_| malformed(line_no, "edge count is not a number"))?;
            let mut g = Graph::new();
            for _ in 0..n {
                g.add_vertex();
            }
            graph = Some(g);
            continue;
        }
        let g = graph
            .as_mut()
            .ok_or_else(|| malformed(line_no, "edge line before the `p` header"))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(malformed(line_no, "edge lines carry exactly two endpoints"));
        }
        let endpoint = |token: &str| -> Result<VertexId, ParseError> {
            let value =
                token.parse::<u32>().map_err(|_| malformed(line_no, "endpoint is not a number"))?;
            if value == 0 || value > n {
                return Err(malformed(line_no, format!("endpoint {value} out of range 1..={n}")));
            }
            Ok(VertexId(value - 1))
        };
        let u = endpoint(fields[0])?;
        let v = endpoint(fields[1])?;
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).unwrap();
        }
    }
    graph.ok_or_else(|| malformed(0, "missing `p` header"))
}

pub fn emit_pace(g: &Graph) -> String {
    let index: BTreeMap<VertexId, usize> =
        g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect();
    let mut out = format!("p vc {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", index[&u], index[&v]));
    }
    out
}

/// Edge list: one `u v` pair per line, 0-indexed, `#` comments. Vertices are
/// the union of all mentioned endpoints plus optional `v <id>` lines for
/// isolated vertices.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    let ensure = |g: &mut Graph, id: u32| {
        if !g.is_live(VertexId(id)) {
            g.insert_vertex_with_id(VertexId(id)).unwrap();
        }
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() == 2 && fields[0] == "v" {
            let id = fields[1]
                .parse::<u32>()
                .map_err(|_| malformed(line_no, "vertex id is not a number"))?;
            ensure(&mut g, id);
            continue;
        }
        if fields.len() != 2 {
            return Err(malformed(line_no, "expected `u v`"));
        }
        let u = fields[0].parse::<u32>().map_err(|_| malformed(line_no, "bad endpoint"))?;
        let v = fields[1].parse::<u32>().map_err(|_| malformed(line_no, "bad endpoint"))?;
        ensure(&mut g, u);
        ensure(&mut g, v);
        if u != v && !g.has_edge(VertexId(u), VertexId(v)) {
            g.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
    }
    Ok(g)
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        if g.degree(v).unwrap() == 0 {
            out.push_str(&format!("v {v}\n"));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Decodes one line of the standard graph6 format (n <= 62 is enough here;
/// the long forms are rejected).
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let bytes = line.trim_end().as_bytes();
    if bytes.is_empty() {
        return Err(ParseError::Graph6("empty line".into()));
    }
    if bytes[0] == b'~' {
        return Err(ParseError::Graph6("graphs with more than 62 vertices unsupported".into()));
    }
    for &b in bytes {
        if !(63..=126).contains(&b) {
            return Err(ParseError::Graph6(format!("byte {b} out of printable range")));
        }
    }
    let n = (bytes[0] - 63) as u32;
    let bits_needed = (n as usize) * (n as usize - 1) / 2;
    let groups = bits_needed.div_ceil(6);
    if bytes.len() != 1 + groups {
        return Err(ParseError::Graph6(format!(
            "expected {} data bytes for n={n}, found {}",
            groups,
            bytes.len() - 1
        )));
    }
    let mut g = Graph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    let mut bit_index = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[1 + bit_index / 6] - 63;
            let bit = (byte >> (5 - bit_index % 6)) & 1;
            if bit == 1 {
                g.add_edge(VertexId(i), VertexId(j)).unwrap();
            }
            bit_index += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph in graph6, compacting vertex ids to 0..n in sorted order.
pub fn emit_graph6(g: &Graph) -> String {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    assert!(n <= 62, "graph6 emitter supports at most 62 vertices");
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut bits = vec![false; n * (n - 1) / 2];
    let bit_of = |i: usize, j: usize| -> usize {
        debug_assert!(i < j);
        j * (j - 1) / 2 + i
    };
    for (u, v) in g.edges() {
        let (i, j) = (index[&u].min(index[&v]), index[&u].max(index[&v]));
        bits[bit_of(i, j)] = true;
    }
    let mut out = String::new();
    out.push((63 + n as u8) as char);
    for chunk in bits.chunks(6) {
        let mut value = 0u8;
        for (pos, &bit) in chunk.iter().enumerate() {
            if bit {
                value |= 1 << (5 - pos);
            }
        }
        out.push((63 + value) as char);
    }
    out
}

/// Serializes a trace as JSON lines, one record per line.
pub fn emit_json_trace(trace: &[ModificationRecord]) -> String {
    let mut out = String::new();
    for record in trace {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_json_trace(text: &str) -> Result<Vec<ModificationRecord>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ModificationRecord = serde_json::from_str(line)
            .map_err(|e| malformed(idx + 1, format!("bad trace record: {e}")))?;
        out.push(record);
    }
    Ok(out)
}

/// Renders a trace as layered DOT: one cluster per step, vertices tagged by
/// role (boundary, removed next, freshly added).
pub fn emit_dot(initial: &Instance, trace: &[ModificationRecord]) -> String {
    let mut out = String::from("digraph trace {\n  node [shape=circle];\n");
    let mut instance = initial.clone();
    for (layer, upcoming) in trace.iter().map(Some).chain([None]).enumerate() {
        let fresh: std::collections::BTreeSet<VertexId> = if layer == 0 {
            Default::default()
        } else {
            trace[layer - 1].added_vertices.iter().copied().collect()
        };
        out.push_str(&format!("  subgraph cluster_{layer} {{\n"));
        let label = match upcoming {
            Some(record) => format!("step {}: {}", record.step, record.rule),
            None => "final".to_string(),
        };
        out.push_str(&format!("    label=\"{label}\";\n"));
        for v in instance.graph.vertices() {
            let mut attrs: Vec<&str> = Vec::new();
            if let Some(record) = upcoming {
                if record.removed_vertices.contains(&v) {
                    attrs.push("color=red");
                }
                if record.boundary.contains(&v) {
                    attrs.push("color=blue");
                }
            }
            if fresh.contains(&v) {
                attrs.push("style=filled fillcolor=green");
            }
            out.push_str(&format!("    l{layer}_{v} [label=\"{v}\" {}];\n", attrs.join(" ")));
        }
        for (u, v) in instance.graph.edges() {
            out.push_str(&format!("    l{layer}_{u} -> l{layer}_{v} [dir=none];\n"));
        }
        out.push_str("  }\n");
        if let Some(record) = upcoming {
            record.replay(&mut instance).expect("trace replays");
        }
    }
    out.push_str("}\n");
    out
}

/// Solution file: first line is the cover size, then one vertex id per line.
pub fn emit_solution(cover: &[VertexId]) -> String {
    let mut out = format!("{}\n", cover.len());
    for v in cover {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn parse_solution(text: &str) -> Result<Vec<VertexId>, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (line_no, first) =
        lines.next().ok_or_else(|| malformed(0, "empty solution file"))?;
    let count: usize =
        first.trim().parse().map_err(|_| malformed(line_no + 1, "bad cover size"))?;
    let mut out = Vec::with_capacity(count);
    for (idx, line) in lines {
        let id: u32 = line.trim().parse().map_err(|_| malformed(idx + 1, "bad vertex id"))?;
        out.push(VertexId(id));
    }
    if out.len() != count {
        return Err(malformed(0, format!("expected {count} vertices, found {}", out.len())));
    }
    Ok(out)
}
