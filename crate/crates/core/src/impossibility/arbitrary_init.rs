//! Arbitrary initial states: a stable configuration survives edge removal.
//!
//! Run a protocol on `G` until it sits in a stable configuration, then hand
//! that configuration to the same agents on `G` minus one edge. Every
//! execution on the smaller graph is also an execution on `G`, so the output
//! can never change, whatever the smaller graph's class.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::engine::{enumerate_reachable, is_stable_configuration, Configuration, Output, Protocol, RunOptions, StateId};
use crate::error::{Error, Result};
use crate::graph::{is_bipartite, is_line, is_ring, is_star, is_tree, AgentId, Graph, GraphClass};
use crate::scheduler::SchedulerSpec;

/// Oracle verdicts for the common classes, plus `extra` if given.
pub fn classify(g: &Graph, extra: Option<GraphClass>) -> BTreeMap<String, bool> {
    let mut m = BTreeMap::from([
        ("tree".to_string(), is_tree(g)),
        ("line".to_string(), is_line(g)),
        ("ring".to_string(), is_ring(g)),
        ("star".to_string(), is_star(g)),
        ("bipartite".to_string(), is_bipartite(g)),
    ]);
    if let Some(c) = extra {
        m.insert(c.to_string(), c.holds(g));
    }
    m
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRemovalReport {
    pub protocol: String,
    pub graph: String,
    pub edge: (AgentId, AgentId),
    /// Steps until the base configuration was verified stable.
    pub base_steps: u64,
    pub base_output: Output,
    pub copied: Vec<StateId>,
    pub reduced_edges: Vec<(AgentId, AgentId)>,
    pub reachable_count: usize,
    /// Every configuration reachable on the reduced graph outputs
    /// `base_output` at every agent.
    pub outputs_preserved: bool,
    pub base_classes: BTreeMap<String, bool>,
    pub reduced_classes: BTreeMap<String, bool>,
    /// The class the protocol identifies, if it names one.
    pub class: Option<String>,
    /// The identified class differs between the two graphs.
    pub class_differs: Option<bool>,
    pub passed: bool,
}

/// Runs on `g` under `scheduler` until the configuration is stable (checked
/// by exhaustive search every `opts.window` quiet steps), copies it onto
/// `g - edge` and explores everything reachable there.
pub fn edge_removal_counterexample(
    protocol: &Protocol,
    g: &Graph,
    label: &str,
    edge: (AgentId, AgentId),
    scheduler: &SchedulerSpec,
    opts: RunOptions,
    cap: usize,
) -> Result<EdgeRemovalReport> {
    let reduced = g.without_edge(edge.0, edge.1)?;
    let mut sched = scheduler.build(g)?;
    let mut config = protocol.initial_configuration(g.n());
    let mut outputs = protocol.outputs_of(&config);
    let mut last_change = 0u64;
    let mut taken = 0u64;
    let base_output = loop {
        if taken - last_change >= opts.window && taken.is_multiple_of(opts.window) {
            if let Some(o) = protocol.uniform_output(&config) {
                if is_stable_configuration(protocol, g, &config, cap)? {
                    break o;
                }
            }
        }
        if taken >= opts.max_steps {
            return Err(Error::Budget(format!("no stable configuration on {label} within {} steps", opts.max_steps)));
        }
        let Some(it) = sched.next(g, taken) else {
            return Err(Error::Budget("scheduler ended before a stable configuration".into()));
        };
        crate::engine::apply(protocol, g, &mut config, it)?;
        for a in [it.initiator, it.responder] {
            let o = protocol.gamma(config[a]);
            if o != outputs[a] {
                outputs[a] = o;
                last_change = taken + 1;
            }
        }
        taken += 1;
    };

    let copied: Configuration = config.clone();
    let reach = enumerate_reachable(protocol, &reduced, &copied, cap)?;
    let outputs_preserved = reach.configs().all(|c| c.iter().all(|&s| protocol.gamma(s) == base_output));
    let class = protocol.class();
    let class_differs = class.map(|c| c.holds(g) != c.holds(&reduced));
    Ok(EdgeRemovalReport {
        protocol: protocol.name().to_string(),
        graph: label.to_string(),
        edge,
        base_steps: taken,
        base_output,
        copied: copied.0,
        reduced_edges: reduced.edges().to_vec(),
        reachable_count: reach.len(),
        outputs_preserved,
        base_classes: classify(g, class),
        reduced_classes: classify(&reduced, class),
        class: class.map(|c| c.to_string()),
        class_differs,
        passed: outputs_preserved && class_differs != Some(false),
    })
}
