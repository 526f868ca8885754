//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! `u < v`, 0-indexed, ASCII, LF-terminated.

use super::Graph;
use crate::error::{Error, Result};

pub fn write_graph_file(g: &Graph) -> Vec<u8> {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out.into_bytes()
}

pub fn parse_graph_file(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::GraphFile { line: 0, reason: "not ASCII/UTF-8".into() })?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, reason: &str| Error::GraphFile { line: line + 1, reason: reason.to_string() };

    let (hline, header) = lines.next().ok_or_else(|| bad(0, "missing header"))?;
    let (n, m) = pair(header).ok_or_else(|| bad(hline, "header must be `n m`"))?;
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let (u, v) = pair(line).ok_or_else(|| bad(idx, "edge line must be `u v`"))?;
        if u >= n || v >= n {
            return Err(bad(idx, "vertex id out of range"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(bad(hline, &format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges)
}

fn pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, is_ring};

    #[test]
    fn parses_triangle() {
        let g = parse_graph_file(b"3 3\n0 1\n1 2\n0 2\n").unwrap();
        assert!(is_ring(&g) && g.n() == 3);
    }

    #[test]
    fn writes_line2_bit_exact() {
        let g = generate(&"line:2".parse().unwrap()).unwrap();
        assert_eq!(write_graph_file(&g), b"2 1\n0 1\n");
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert!(matches!(parse_graph_file(b"2 0\n"), Err(Error::Disconnected)));
        assert!(matches!(parse_graph_file(b"x\n"), Err(Error::GraphFile { .. })));
        assert!(matches!(parse_graph_file(b"2 1\n0 5\n"), Err(Error::GraphFile { .. })));
        assert!(matches!(parse_graph_file(b"3 2\n0 1\n"), Err(Error::GraphFile { .. })));
        assert!(matches!(parse_graph_file(b"3 3\n0 1\n1 2\n2 1\n"), Err(Error::InvalidGraph(_))));
        assert!(parse_graph_file(b"").is_err());
    }
}
