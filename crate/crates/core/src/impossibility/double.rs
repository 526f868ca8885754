//! Doubling a graph around agent 0 under weak fairness.
//!
//! The doubled graph holds two copies of `G`. Each edge `(0, z)` also gets the
//! cross edges `(0, z + n)` and `(n, z)`. Given a periodic weakly-fair
//! execution on `G`, the doubled execution alternates between playing each
//! segment once in each copy and playing it with the two pivots swapped, so
//! that both copies always mirror `G` exactly at segment boundaries.

use std::collections::HashMap;

use serde::Serialize;

use super::{replay_script, EquivalenceWitness};
use crate::engine::{apply, Configuration, Interaction, Output, Protocol, StateId, Trace};
use crate::error::{Error, Result};
use crate::graph::{AgentId, Graph};
use crate::scheduler::{canonical_order, fairness_audit, FairnessAudit};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledGraph {
    pub base: Graph,
    pub doubled: Graph,
    /// Agent 0 of the base graph.
    pub pivot: AgentId,
}

pub fn double_graph(g: &Graph) -> Result<DoubledGraph> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidGraph("doubling needs at least two agents".into()));
    }
    let mut edges = Vec::with_capacity(2 * g.edge_count() + 2 * g.degree(0));
    for &(x, y) in g.edges() {
        edges.push((x, y));
        edges.push((x + n, y + n));
    }
    for &z in g.neighbors(0) {
        edges.push((0, z + n));
        edges.push((n, z));
    }
    Ok(DoubledGraph { base: g.clone(), doubled: Graph::from_edges(2 * n, edges)?, pivot: 0 })
}

impl DoubledGraph {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Copy of base agent `x` used by block `block` (0 or 1) of a segment.
    /// Odd segments swap the two pivots.
    fn image(&self, x: AgentId, block: usize, odd: bool) -> AgentId {
        let n = self.n();
        match (block, odd) {
            (0, false) => x,
            (1, false) => x + n,
            (0, true) if x == self.pivot => self.pivot + n,
            (0, true) => x,
            (1, true) if x == self.pivot => self.pivot,
            _ => x + n,
        }
    }

    fn map(&self, it: Interaction, block: usize, odd: bool) -> Interaction {
        Interaction::new(self.image(it.initiator, block, odd), self.image(it.responder, block, odd))
    }
}

#[derive(Debug, Clone)]
pub struct DoubledExecution {
    pub doubled: DoubledGraph,
    pub base_trace: Trace,
    pub doubled_trace: Trace,
    /// Base and doubled configurations at every segment boundary.
    pub witness: EquivalenceWitness,
    /// Round-robin sweeps before the first repeated boundary configuration.
    pub prefix_sweeps: usize,
    /// Sweeps per segment (the period of the boundary configurations).
    pub period_sweeps: usize,
    /// Uniform output of the doubled configuration at each boundary.
    pub boundary_outputs: Vec<Option<Output>>,
    /// Uniform output of the base configuration at the first boundary.
    pub base_output: Option<Output>,
    /// Audit of one odd and one even segment of the doubled script.
    pub audit: FairnessAudit,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubledReport {
    pub base_edges: Vec<(AgentId, AgentId)>,
    pub doubled_edges: Vec<(AgentId, AgentId)>,
    pub doubled_is_tree: bool,
    pub prefix_sweeps: usize,
    pub period_sweeps: usize,
    pub segments: usize,
    pub base_output: Option<Output>,
    pub boundary_outputs_uniform: bool,
    pub witness_violations: usize,
    pub fairness_debt: usize,
    pub witness_sample: Vec<(Vec<StateId>, Vec<StateId>)>,
    pub passed: bool,
}

impl DoubledExecution {
    pub fn passed(&self) -> bool {
        self.witness.holds()
            && self.audit.zero_debt()
            && self.base_output.is_some()
            && self.boundary_outputs.iter().all(|&o| o == self.base_output)
    }

    pub fn report(&self) -> DoubledReport {
        DoubledReport {
            base_edges: self.doubled.base.edges().to_vec(),
            doubled_edges: self.doubled.doubled.edges().to_vec(),
            doubled_is_tree: crate::graph::is_tree(&self.doubled.doubled),
            prefix_sweeps: self.prefix_sweeps,
            period_sweeps: self.period_sweeps,
            segments: self.boundary_outputs.len().saturating_sub(1),
            base_output: self.base_output,
            boundary_outputs_uniform: self.boundary_outputs.iter().all(|&o| o.is_some() && o == self.base_output),
            witness_violations: self.witness.violations().len(),
            fairness_debt: self.audit.debt.len(),
            witness_sample: self.witness.sample(3),
            passed: self.passed(),
        }
    }
}

/// Runs round-robin sweeps on `g` until a sweep-boundary configuration
/// repeats, then builds `segments` segments of the doubled execution.
///
/// `budget` bounds the number of base steps spent looking for the repeat.
pub fn build_doubled_execution(protocol: &Protocol, g: &Graph, label: &str, segments: usize, budget: u64) -> Result<DoubledExecution> {
    let dg = double_graph(g)?;
    let sweep = canonical_order(g, true);
    if sweep.is_empty() {
        return Err(Error::NoEdges);
    }

    let mut config = protocol.initial_configuration(g.n());
    let mut seen: HashMap<Configuration, usize> = HashMap::from([(config.clone(), 0)]);
    let (prefix_sweeps, period_sweeps) = 'search: {
        let mut sweeps = 0usize;
        while ((sweeps + 1) * sweep.len()) as u64 <= budget {
            for &it in &sweep {
                apply(protocol, g, &mut config, it)?;
            }
            sweeps += 1;
            if let Some(&k) = seen.get(&config) {
                break 'search (k, sweeps - k);
            }
            seen.insert(config.clone(), sweeps);
        }
        return Err(Error::Budget(format!("no repeated sweep boundary within {budget} steps")));
    };

    let m = period_sweeps * sweep.len();
    let prefix: Vec<Interaction> = sweep.iter().copied().cycle().take(prefix_sweeps * sweep.len()).collect();
    let segment: Vec<Interaction> = sweep.iter().copied().cycle().take(m).collect();

    let mut base_script = prefix.clone();
    let mut doubled_script: Vec<Interaction> = prefix.iter().map(|&it| dg.map(it, 0, false)).collect();
    doubled_script.extend(prefix.iter().map(|&it| dg.map(it, 1, false)));
    for j in 1..=segments {
        let odd = j % 2 == 1;
        base_script.extend_from_slice(&segment);
        for block in 0..2 {
            doubled_script.extend(segment.iter().map(|&it| dg.map(it, block, odd)));
        }
    }

    let p = prefix.len() as u64;
    let base_marks: Vec<u64> = (0..=segments as u64).map(|j| p + j * m as u64).collect();
    let doubled_marks: Vec<u64> = base_marks.iter().map(|b| 2 * b).collect();
    let init2 = protocol.initial_configuration(dg.doubled.n());
    let (base_trace, base_at) = replay_script(protocol, g, label, &base_script, protocol.initial_configuration(g.n()), &base_marks)?;
    let dlabel = format!("double({label})");
    let (doubled_trace, doubled_at) = replay_script(protocol, &dg.doubled, &dlabel, &doubled_script, init2, &doubled_marks)?;

    let mut witness = EquivalenceWitness::new(g.n());
    for (c, d) in base_at.iter().zip(&doubled_at) {
        witness.push(c, d);
    }
    let boundary_outputs = doubled_at.iter().map(|d| protocol.uniform_output(d)).collect();
    let base_output = protocol.uniform_output(&base_at[0]);

    let start = 2 * p as usize;
    let end = (start + 4 * m).min(doubled_script.len());
    let audit = fairness_audit(&doubled_script[start..end], &dg.doubled);

    Ok(DoubledExecution {
        doubled: dg,
        base_trace,
        doubled_trace,
        witness,
        prefix_sweeps,
        period_sweeps,
        boundary_outputs,
        base_output,
        audit,
    })
}
