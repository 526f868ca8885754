//! Exhaustive reachability and the bottom-SCC stability check.
//!
//! Under global fairness an infinite execution eventually stays inside one
//! bottom strongly connected component of the reachable configuration
//! digraph and visits every configuration of it infinitely often. A protocol
//! therefore converges to a stable all-`yn` configuration under global
//! fairness iff every bottom SCC consists only of all-`yn` configurations.

use indexmap::IndexSet;
use serde::Serialize;

use super::{Configuration, Output, Protocol, StateId};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Reachable configurations in BFS order plus the successor relation (CSR).
#[derive(Debug)]
pub struct ReachableGraph {
    configs: IndexSet<Box<[StateId]>>,
    offsets: Vec<u32>,
    succ: Vec<u32>,
}

impl ReachableGraph {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn config(&self, id: usize) -> &[StateId] {
        &self.configs[id]
    }

    pub fn configs(&self) -> impl Iterator<Item = &[StateId]> {
        self.configs.iter().map(|c| &**c)
    }

    pub fn contains(&self, config: &[StateId]) -> bool {
        self.configs.contains(config)
    }

    /// Distinct successors of `id`, excluding itself.
    pub fn successors(&self, id: usize) -> &[u32] {
        &self.succ[self.offsets[id] as usize..self.offsets[id + 1] as usize]
    }

    /// Tarjan's algorithm, iterative. Returns the component id of every
    /// configuration; ids are assigned in reverse topological order.
    pub fn scc_ids(&self) -> (Vec<u32>, usize) {
        const UNSEEN: u32 = u32::MAX;
        let n = self.len();
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut call: Vec<(u32, usize)> = Vec::new();
        let mut next_index = 0u32;
        let mut comps = 0usize;

        for root in 0..n as u32 {
            if index[root as usize] != UNSEEN {
                continue;
            }
            call.push((root, 0));
            index[root as usize] = next_index;
            low[root as usize] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root as usize] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                let succ = self.successors(v as usize);
                if *pos < succ.len() {
                    let w = succ[*pos];
                    *pos += 1;
                    if index[w as usize] == UNSEEN {
                        index[w as usize] = next_index;
                        low[w as usize] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w as usize] = true;
                        call.push((w, 0));
                    } else if on_stack[w as usize] {
                        low[v as usize] = low[v as usize].min(index[w as usize]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent as usize] = low[parent as usize].min(low[v as usize]);
                    }
                    if low[v as usize] == index[v as usize] {
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w as usize] = false;
                            comp[w as usize] = comps as u32;
                            if w == v {
                                break;
                            }
                        }
                        comps += 1;
                    }
                }
            }
        }
        (comp, comps)
    }

    /// Members of every bottom SCC (no edge leaves the component).
    pub fn bottom_sccs(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.scc_ids();
        let mut is_bottom = vec![true; count];
        for v in 0..self.len() {
            if self.successors(v).iter().any(|&w| comp[w as usize] != comp[v]) {
                is_bottom[comp[v] as usize] = false;
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for v in 0..self.len() {
            if is_bottom[comp[v] as usize] {
                members[comp[v] as usize].push(v);
            }
        }
        members.into_iter().filter(|m| !m.is_empty()).collect()
    }
}

/// BFS over all single-interaction successors (both orientations of every
/// edge) from `from`.
pub fn enumerate_reachable(protocol: &Protocol, graph: &Graph, from: &Configuration, cap: usize) -> Result<ReachableGraph> {
    protocol.validate_configuration(graph, from)?;
    let mut configs: IndexSet<Box<[StateId]>> = IndexSet::new();
    configs.insert(from.0.clone().into_boxed_slice());
    let mut offsets = vec![0u32];
    let mut succ: Vec<u32> = Vec::new();
    let mut scratch: Vec<StateId> = Vec::with_capacity(graph.n());
    let mut local: Vec<u32> = Vec::new();

    let mut cursor = 0;
    while cursor < configs.len() {
        local.clear();
        for &(u, v) in graph.edges() {
            for (a, b) in [(u, v), (v, u)] {
                scratch.clear();
                scratch.extend_from_slice(&configs[cursor]);
                let (p, q) = protocol.delta(scratch[a], scratch[b]);
                if (p, q) == (scratch[a], scratch[b]) {
                    continue;
                }
                scratch[a] = p;
                scratch[b] = q;
                let id = match configs.get_index_of(scratch.as_slice()) {
                    Some(id) => id,
                    None => {
                        if configs.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        configs.insert_full(scratch.clone().into_boxed_slice()).0
                    }
                };
                if id != cursor {
                    local.push(id as u32);
                }
            }
        }
        local.sort_unstable();
        local.dedup();
        succ.extend_from_slice(&local);
        offsets.push(succ.len() as u32);
        cursor += 1;
    }
    Ok(ReachableGraph { configs, offsets, succ })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityVerdict {
    AllYesStable,
    AllNoStable,
    /// Some bottom SCC contains a configuration without a uniform output, or
    /// both all-yes and all-no configurations.
    NotConvergent,
    /// Every bottom SCC is uniform, but they disagree.
    Mixed,
}

impl StabilityVerdict {
    pub fn output(self) -> Option<Output> {
        match self {
            StabilityVerdict::AllYesStable => Some(Output::Yes),
            StabilityVerdict::AllNoStable => Some(Output::No),
            _ => None,
        }
    }
}

impl std::fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StabilityVerdict::AllYesStable => "all-yes-stable",
            StabilityVerdict::AllNoStable => "all-no-stable",
            StabilityVerdict::NotConvergent => "not-convergent",
            StabilityVerdict::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BottomScc {
    pub size: usize,
    /// Uniform output shared by every configuration, if any.
    pub output: Option<Output>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub reachable_count: usize,
    pub verdict: StabilityVerdict,
    pub bottom_sccs: Vec<BottomScc>,
    /// A configuration from a bottom SCC that breaks the verdict, if any.
    pub witness: Option<Vec<StateId>>,
}

/// Bottom-SCC analysis of everything reachable from the designated initial
/// configuration.
pub fn check_stable(protocol: &Protocol, graph: &Graph, cap: usize) -> Result<StabilityReport> {
    check_stable_from(protocol, graph, &protocol.initial_configuration(graph.n()), cap)
}

pub fn check_stable_from(protocol: &Protocol, graph: &Graph, from: &Configuration, cap: usize) -> Result<StabilityReport> {
    let reach = enumerate_reachable(protocol, graph, from, cap)?;
    let mut bottom = Vec::new();
    let mut witness = None;
    let mut seen_yes = None;
    let mut seen_no = None;
    for members in reach.bottom_sccs() {
        let outputs: Vec<Option<Output>> = members.iter().map(|&c| protocol.uniform_output(reach.config(c))).collect();
        let first = outputs[0];
        let uniform = if outputs.iter().all(|&o| o == first) { first } else { None };
        match uniform {
            Some(Output::Yes) => {
                seen_yes.get_or_insert(members[0]);
            }
            Some(Output::No) => {
                seen_no.get_or_insert(members[0]);
            }
            None => {
                if witness.is_none() {
                    let bad = members.iter().zip(&outputs).find(|(_, o)| o.is_none()).map_or(members[0], |(&c, _)| c);
                    witness = Some(reach.config(bad).to_vec());
                }
            }
        }
        bottom.push(BottomScc { size: members.len(), output: uniform });
    }
    let verdict = if witness.is_some() {
        StabilityVerdict::NotConvergent
    } else {
        match (seen_yes, seen_no) {
            (Some(_), None) => StabilityVerdict::AllYesStable,
            (None, Some(_)) => StabilityVerdict::AllNoStable,
            (Some(_), Some(c)) => {
                witness = Some(reach.config(c).to_vec());
                StabilityVerdict::Mixed
            }
            (None, None) => unreachable!("a finite digraph has at least one bottom SCC"),
        }
    };
    Ok(StabilityReport { reachable_count: reach.len(), verdict, bottom_sccs: bottom, witness })
}

/// `config` has a uniform output and every configuration reachable from it
/// keeps that output.
pub fn is_stable_configuration(protocol: &Protocol, graph: &Graph, config: &Configuration, cap: usize) -> Result<bool> {
    protocol.validate_configuration(graph, config)?;
    let Some(out) = protocol.uniform_output(config) else {
        return Ok(false);
    };
    let mut seen: IndexSet<Box<[StateId]>> = IndexSet::new();
    seen.insert(config.0.clone().into_boxed_slice());
    let mut cursor = 0;
    let mut scratch = Vec::with_capacity(graph.n());
    while cursor < seen.len() {
        for &(u, v) in graph.edges() {
            for (a, b) in [(u, v), (v, u)] {
                scratch.clear();
                scratch.extend_from_slice(&seen[cursor]);
                let (p, q) = protocol.delta(scratch[a], scratch[b]);
                if protocol.gamma(p) != out || protocol.gamma(q) != out {
                    return Ok(false);
                }
                scratch[a] = p;
                scratch[b] = q;
                if !seen.contains(scratch.as_slice()) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(scratch.clone().into_boxed_slice());
                }
            }
        }
        cursor += 1;
    }
    Ok(true)
}
