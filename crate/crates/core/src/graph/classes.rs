//! Ground-truth class oracles.
//!
//! These are the references every protocol verdict is compared against, so
//! each one is computed directly from its definition rather than through the
//! cheapest characterisation.

use std::fmt;

use super::Graph;

/// Acyclic (connectivity is already a graph invariant).
pub fn is_tree(g: &Graph) -> bool {
    // Iterative DFS; any non-tree edge closes a cycle.
    let mut parent = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if v == parent[u] {
                continue;
            }
            if seen[v] {
                return false;
            }
            seen[v] = true;
            parent[v] = u;
            stack.push(v);
        }
    }
    true
}

/// Every agent has degree `k`.
pub fn is_kregular(g: &Graph, k: usize) -> bool {
    g.degrees().all(|d| d == k)
}

/// Every agent has degree 2.
pub fn is_ring(g: &Graph) -> bool {
    is_kregular(g, 2)
}

/// A tree with one internal agent and `n - 1` leaves; graphs with `n <= 2`
/// are stars by definition.
pub fn is_star(g: &Graph) -> bool {
    let n = g.n();
    if n <= 2 {
        return true;
    }
    is_tree(g) && g.degrees().filter(|&d| d == n - 1).count() == 1 && g.degrees().filter(|&d| d == 1).count() == n - 1
}

/// A path `v_1 - v_2 - ... - v_n` up to relabeling.
pub fn is_line(g: &Graph) -> bool {
    is_tree(g) && g.degrees().all(|d| d <= 2)
}

/// Two-colorable, by BFS coloring.
pub fn is_bipartite(g: &Graph) -> bool {
    let mut color = vec![u8::MAX; g.n()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    color[0] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if color[v] == u8::MAX {
                color[v] = 1 - color[u];
                queue.push_back(v);
            } else if color[v] == color[u] {
                return false;
            }
        }
    }
    true
}

/// The graph property a protocol claims to identify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Tree,
    KRegular(usize),
    Star,
    Line,
    Ring,
    Bipartite,
}

impl GraphClass {
    pub fn holds(&self, g: &Graph) -> bool {
        match *self {
            GraphClass::Tree => is_tree(g),
            GraphClass::KRegular(k) => is_kregular(g, k),
            GraphClass::Star => is_star(g),
            GraphClass::Line => is_line(g),
            GraphClass::Ring => is_ring(g),
            GraphClass::Bipartite => is_bipartite(g),
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::Tree => write!(f, "tree"),
            GraphClass::KRegular(k) => write!(f, "{k}-regular"),
            GraphClass::Star => write!(f, "star"),
            GraphClass::Line => write!(f, "line"),
            GraphClass::Ring => write!(f, "ring"),
            GraphClass::Bipartite => write!(f, "bipartite"),
        }
    }
}
