//! graph6 and plain edge-list formats.
//!
//! The edge-list format is a `p <order>` line followed by one `u v` pair
//! per line; blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    Edges,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g6" | "graph6" => Ok(GraphFormat::Graph6),
            "edges" | "edgelist" => Ok(GraphFormat::Edges),
            _ => Err(Error::Parse(format!("unknown graph format {s:?}"))),
        }
    }
}

const HEADER: &str = ">>graph6<<";

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

pub fn from_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(HEADER).unwrap_or(s).as_bytes();
    if s.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Format("graph6 byte outside 63..=126".into()));
    }
    let (n, rest) = match s {
        [] => return Err(Error::Format("empty graph6 string".into())),
        [126, 126, ..] => {
            return Err(Error::Format(
                "graph6 orders above 258047 are not supported".into(),
            ))
        }
        [126, a, b, c, rest @ ..] => (
            (((*a - 63) as usize) << 12) | (((*b - 63) as usize) << 6) | (*c - 63) as usize,
            rest,
        ),
        [126, ..] => return Err(Error::Format("truncated graph6 order".into())),
        [a, rest @ ..] => ((*a - 63) as usize, rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(Error::Format(format!(
            "graph6 body has {} bytes, expected {}",
            rest.len(),
            nbits.div_ceil(6)
        )));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if (nbits..rest.len() * 6).any(bit) {
        return Err(Error::Format("nonzero graph6 padding".into()));
    }
    Graph::from_edges(n, &edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("p {}\n", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut order = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = || Error::Format(format!("line {}: cannot parse {line:?}", lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (order, fields.as_slice()) {
            (None, ["p", k]) => order = Some(k.parse::<usize>().map_err(|_| err())?),
            (None, _) => {
                return Err(Error::Format(
                    "edge list must start with `p <order>`".into(),
                ))
            }
            (Some(_), [u, v]) => {
                edges.push((u.parse().map_err(|_| err())?, v.parse().map_err(|_| err())?))
            }
            (Some(_), _) => return Err(err()),
        }
    }
    let order = order.ok_or_else(|| Error::Format("missing `p <order>` line".into()))?;
    Graph::from_edges(order, &edges)
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Graph6 => to_graph6(g) + "\n",
        GraphFormat::Edges => to_edge_list(g),
    }
}

pub fn read_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Graph6 => from_graph6(text),
        GraphFormat::Edges => from_edge_list(text),
    }
}

/// Edge list when the first meaningful line starts with `p`, graph6
/// otherwise.
pub fn detect_format(text: &str) -> GraphFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("p ") || l == "p" => GraphFormat::Edges,
        None if text.trim_start().starts_with('#') => GraphFormat::Edges,
        _ => GraphFormat::Graph6,
    }
}
