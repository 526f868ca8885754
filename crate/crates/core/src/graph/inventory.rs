//! Exhaustive inventories of small connected graphs.

use std::collections::BTreeSet;

use super::Graph;

/// Every connected labeled graph on `n` agents (`n <= 7`).
pub fn connected_labeled_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=7).contains(&n), "labeled enumeration only supported for 1 <= n <= 7");
    let pairs = all_pairs(n);
    (0u64..1 << pairs.len()).filter_map(|mask| Graph::from_edges(n, select(&pairs, mask)).ok()).collect()
}

/// One representative per isomorphism class of connected graphs on `n`
/// agents (`n <= 6`). Representatives use the lexicographically smallest
/// edge mask over all relabelings.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "isomorphism inventory only supported for 1 <= n <= 6");
    let pairs = all_pairs(n);
    let perms = permutations(n);
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    let mut canon = BTreeSet::new();
    for g in connected_labeled_graphs(n) {
        let best = perms.iter().map(|p| g.edges().iter().fold(0u64, |acc, &(u, v)| acc | 1 << index[p[u]][p[v]])).min().unwrap();
        canon.insert(best);
    }
    canon.into_iter().map(|mask| Graph::from_edges(n, select(&pairs, mask)).unwrap()).collect()
}

/// All connected graphs with `1..=max_n` agents, one per isomorphism class.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn select(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
