//! Plain-text graph files: a line `n m`, then `m` lines `u v` (0-based).

use super::{catalog, Graph, GraphError};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphReadError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("`{0}` is neither a readable file nor a catalog name")]
    NotFound(String),
}

pub fn parse_graph_text(text: &str) -> Result<Graph, GraphReadError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line, msg: &str| GraphReadError::Parse { line, msg: msg.to_string() };
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
    let nums = parse_pair(header).ok_or_else(|| err(ln, "expected `n m`"))?;
    let (n, m) = nums;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = lines.next().ok_or_else(|| err(ln, "fewer edge lines than declared"))?;
        edges.push(parse_pair(l).ok_or_else(|| err(ln, "expected `u v`"))?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, "more edge lines than declared"));
    }
    Ok(Graph::new(n, edges)?)
}

fn parse_pair(l: &str) -> Option<(usize, usize)> {
    let mut it = l.split_whitespace().map(str::parse::<usize>);
    let a = it.next()?.ok()?;
    let b = it.next()?.ok()?;
    it.next().is_none().then_some((a, b))
}

pub fn write_graph_text(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Reads a graph file, falling back to the catalog when `spec` is not a file.
pub fn read_graph(spec: &str) -> Result<Graph, GraphReadError> {
    let p = Path::new(spec);
    if p.is_file() {
        return parse_graph_text(&std::fs::read_to_string(p)?);
    }
    catalog(spec, &[]).map_err(|_| GraphReadError::NotFound(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = catalog("B+", &[]).unwrap();
        assert_eq!(parse_graph_text(&write_graph_text(&g)).unwrap(), g);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_graph_text("3 2\n0 1\n"), Err(GraphReadError::Parse { .. })));
        assert!(matches!(parse_graph_text("3 1\n0 0\n"), Err(GraphReadError::Graph(_))));
        assert!(matches!(read_graph("no-such-graph"), Err(GraphReadError::NotFound(_))));
        assert_eq!(read_graph("K5-").unwrap().m(), 9);
    }
}
