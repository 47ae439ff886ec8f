//! Plain-text edge lists.
//!
//! ```text
//! # nodes=4 edges=3 seed=7
//! 0 1
//! 0 2
//! 1 3
//! ```
//!
//! One `u v` pair per line with `u < v`, ascending by `u` then `v`. The header
//! is mandatory; later lines starting with `#` and blank lines are ignored.

use std::io::{BufRead, Write};

use bufferless_core::Graph;

use crate::error::{HarnessError, Result};

pub fn write_graph<W: Write>(g: &Graph, seed: u64, mut out: W) -> Result<()> {
    writeln!(out, "# nodes={} edges={} seed={}", g.node_count(), g.edge_count(), seed)?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub nodes: usize,
    pub edges: usize,
    pub seed: u64,
}

fn format_err(line: usize, reason: impl Into<String>) -> HarnessError {
    HarnessError::Format { line, reason: reason.into() }
}

fn parse_header(line: &str) -> Option<Header> {
    let mut nodes = None;
    let mut edges = None;
    let mut seed = None;
    for field in line.strip_prefix('#')?.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        match key {
            "nodes" => nodes = value.parse().ok(),
            "edges" => edges = value.parse().ok(),
            "seed" => seed = value.parse().ok(),
            _ => return None,
        }
    }
    Some(Header { nodes: nodes?, edges: edges?, seed: seed? })
}

/// Reads a graph and its header. The edge count must match the header.
pub fn read_graph<R: BufRead>(input: R) -> Result<(Graph, Header)> {
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => {
            let line = line?;
            parse_header(line.trim()).ok_or_else(|| format_err(1, "expected `# nodes=N edges=E seed=S`"))?
        }
        None => return Err(format_err(1, "empty graph file")),
    };
    let mut edges = Vec::with_capacity(header.edges);
    for (i, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace().map(str::parse::<usize>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(format_err(i + 1, format!("expected `u v`, got `{line}`"))),
        }
    }
    if edges.len() != header.edges {
        return Err(format_err(1, format!("header declares {} edges, file has {}", header.edges, edges.len())));
    }
    Ok((Graph::from_edges(header.nodes, edges)?, header))
}
