//! Executable versions of the indistinguishability arguments.
//!
//! Every construction emits an interaction script and replays it through the
//! ordinary engine, then checks the claimed state correspondences exactly.
//!
//! * [`double`]: a weakly-fair execution on a graph and a doubled copy that
//!   keeps both in lockstep.
//! * [`pump`]: a repeating state pair that makes a 4-line and a 4-ring
//!   indistinguishable.
//! * [`bipartite`]: a triangle simulated by a 6-ring, then doubled.
//! * [`arbitrary_init`]: a stable configuration copied onto the graph with one
//!   edge removed.

pub mod arbitrary_init;
pub mod bipartite;
pub mod double;
pub mod pump;

pub use arbitrary_init::{classify, edge_removal_counterexample, EdgeRemovalReport};
pub use bipartite::{
    build_bipartite_triple, build_triangle_to_ring_execution, map_triangle_interaction, BipartiteTriple, TriangleRingExecution,
};
pub use double::{build_doubled_execution, double_graph, DoubledExecution, DoubledGraph};
pub use pump::{build_line_ring_executions, find_pump_pair, pump_plan, pump_sequence, LineRingExecution, PlanKind, PumpPair, PumpPlan};

use serde::Serialize;

use crate::engine::{run_observed, Configuration, Interaction, Protocol, RunOptions, StateId, Trace};
use crate::error::Result;
use crate::graph::Graph;
use crate::scheduler::SchedulerSpec;

/// Configuration pairs `(C on G, D on G')` that should satisfy
/// `C[x] == D[x] == D[x + offset]` for every agent `x` of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub offset: usize,
    pub pairs: Vec<(Vec<StateId>, Vec<StateId>)>,
}

impl EquivalenceWitness {
    pub fn new(offset: usize) -> Self {
        EquivalenceWitness { offset, pairs: Vec::new() }
    }

    pub fn push(&mut self, base: &[StateId], copy: &[StateId]) {
        self.pairs.push((base.to_vec(), copy.to_vec()));
    }

    /// Indices of pairs that are not equivalent.
    pub fn violations(&self) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&i| !equivalent(&self.pairs[i].0, &self.pairs[i].1, self.offset)).collect()
    }

    pub fn holds(&self) -> bool {
        !self.pairs.is_empty() && self.violations().is_empty()
    }

    /// The first `k` pairs, for reports.
    pub fn sample(&self, k: usize) -> Vec<(Vec<StateId>, Vec<StateId>)> {
        self.pairs.iter().take(k).cloned().collect()
    }
}

pub fn equivalent(base: &[StateId], copy: &[StateId], offset: usize) -> bool {
    base.len() <= offset
        && copy.len() == offset + base.len()
        && base.iter().enumerate().all(|(x, &s)| copy[x] == s && copy[x + offset] == s)
}

/// Replays `steps` through the engine and returns the trace together with the
/// configurations after each of the step counts in `marks` (0 is the start).
pub(crate) fn replay_script(
    protocol: &Protocol,
    graph: &Graph,
    label: &str,
    steps: &[Interaction],
    initial: Configuration,
    marks: &[u64],
) -> Result<(Trace, Vec<Configuration>)> {
    let mut at = Vec::with_capacity(marks.len());
    let mut next = 0;
    while next < marks.len() && marks[next] == 0 {
        at.push(initial.clone());
        next += 1;
    }
    let len = steps.len().max(1) as u64;
    let opts = RunOptions { max_steps: len, window: len, record_steps: true };
    let trace = run_observed(protocol, graph, label, &SchedulerSpec::script(steps.to_vec()), initial, opts, |ev| {
        while next < marks.len() && marks[next] == ev.index + 1 {
            at.push(ev.config.clone());
            next += 1;
        }
    })?;
    Ok((trace, at))
}
