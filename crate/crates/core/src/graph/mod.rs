//! Undirected simple connected communication graphs.
//!
//! Agents are dense 0-based integers. Every [`Graph`] is validated on
//! construction: no self-loops, no duplicate edges, connected. Adjacency lists
//! and the canonical edge list (pairs `(u, v)` with `u < v`, sorted) always
//! agree with each other.

mod classes;
mod generate;
pub mod inventory;
mod io;

pub use classes::{is_bipartite, is_kregular, is_line, is_ring, is_star, is_tree, GraphClass};
pub use generate::{generate, GraphFamily, GraphSpec, Mutation};
pub use io::{parse_graph_file, write_graph_file};

use crate::error::{Error, Result};

pub type AgentId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<AgentId>>,
    edges: Vec<(AgentId, AgentId)>,
}

impl Graph {
    /// Builds a graph from an edge list in any orientation and order.
    ///
    /// Rejects out-of-range ids, self-loops, duplicate edges (in either
    /// orientation) and disconnected graphs.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (AgentId, AgentId)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one agent".into()));
        }
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at agent {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph { n, adjacency, edges: canon };
        if !g.connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, sorted, each pair with `u < v`.
    pub fn edges(&self) -> &[(AgentId, AgentId)] {
        &self.edges
    }

    pub fn neighbors(&self, agent: AgentId) -> &[AgentId] {
        &self.adjacency[agent]
    }

    pub fn degree(&self, agent: AgentId) -> usize {
        self.adjacency[agent].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn has_edge(&self, u: AgentId, v: AgentId) -> bool {
        u < self.n && v < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Returns a copy with one extra edge.
    pub fn with_edge(&self, u: AgentId, v: AgentId) -> Result<Self> {
        Graph::from_edges(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    /// Returns a copy without the edge `(u, v)`; fails if the edge is absent or
    /// the remainder is disconnected.
    pub fn without_edge(&self, u: AgentId, v: AgentId) -> Result<Self> {
        let key = (u.min(v), u.max(v));
        if !self.edges.contains(&key) {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) not present")));
        }
        Graph::from_edges(self.n, self.edges.iter().copied().filter(|&e| e != key))
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}
